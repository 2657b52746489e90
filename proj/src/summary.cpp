#include "ipwmc/summary.hpp"

#include "ipwmc/error.hpp"

#include <cmath>

namespace ipwmc {

void SummaryAccumulator::merge(const SummaryAccumulator& other) noexcept {
    if (other.count_ == 0) return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double n = na + nb;
    const double d = other.mean_ - mean_;
    mean_ += d * nb / n;
    m2_ += other.m2_ + d * d * na * nb / n;
    count_ += other.count_;
}

double SummaryAccumulator::variance() const noexcept {
    return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
}

double SummaryAccumulator::stddev() const noexcept { return std::sqrt(variance()); }

double SummaryAccumulator::std_error() const noexcept {
    return count_ == 0 ? 0.0 : stddev() / std::sqrt(static_cast<double>(count_));
}

double sample_covariance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(Errc::domain, "sample_covariance: need two equal-length sequences of size >= 2");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
    return s / (n - 1.0);
}

double sample_variance(std::span<const double> x) { return sample_covariance(x, x); }

} // namespace ipwmc
