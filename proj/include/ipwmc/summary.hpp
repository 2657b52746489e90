#pragma once

#include <cstdint>
#include <span>

namespace ipwmc {

// Streaming mean/variance (Welford). Accumulators built on disjoint chunks
// can be merged (Chan et al. pairwise update).
class SummaryAccumulator {
public:
    void push(double x) noexcept {
        ++count_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(count_);
        m2_ += d * (x - mean_);
    }

    void push(std::span<const double> xs) noexcept {
        for (double x : xs) push(x);
    }

    void merge(const SummaryAccumulator& other) noexcept;

    std::uint64_t count() const noexcept { return count_; }
    double mean() const noexcept { return mean_; }
    double m2() const noexcept { return m2_; }
    // Sample variance, n - 1 divisor; 0 when count < 2.
    double variance() const noexcept;
    double stddev() const noexcept;
    // stddev / sqrt(count)
    double std_error() const noexcept;

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

// Two-pass sample covariance with n - 1 divisor. Spans must have equal length >= 2.
double sample_covariance(std::span<const double> x, std::span<const double> y);
double sample_variance(std::span<const double> x);

} // namespace ipwmc
