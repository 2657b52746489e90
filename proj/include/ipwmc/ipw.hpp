#pragma once
// Inverse-probability-weighted estimators for survey data with known
// response (inclusion) probabilities.
//
// With S = sum_k y_k r_k / p_k and N = sum_k r_k / p_k over n units:
//   Horvitz-Thompson   S / n
//   Hajek              S / N
//   Trotter-Tukey      S / ((1 - lambda) n + lambda N)
//   adaptive normalization picks lambda from the data through the equivalent
//   difference estimator  HT + gamma (1 - N / n).
//
// Every estimator can target the mean (default) or the population total;
// the total is the mean form multiplied by n.

#include <cstdint>
#include <optional>
#include <vector>

namespace ipwmc {

enum class Estimand { mean, total };

struct WeightedSample {
    std::vector<double> y;
    std::vector<double> p;
    std::vector<std::uint8_t> r;
    std::optional<std::vector<double>> a; // auxiliaries with known total

    // Fully observed sample (r_k = 1 for every unit).
    static WeightedSample observed(std::vector<double> y, std::vector<double> p);

    std::size_t size() const noexcept { return y.size(); }

    // Throws Error(Errc::domain) on length mismatch, empty sample, p outside
    // [0,1], r outside {0,1} or a non-positive auxiliary. p_k = 0 is allowed
    // here; the estimators reject it only when the unit responded.
    void validate() const;
};

struct IpwDiagnostics {
    double s_hat = 0.0;
    double n_hat = 0.0;
    double lambda = 0.0; // normalization mix; NaN when no finite mix reproduces the estimate
    double estimate = 0.0;
};

IpwDiagnostics horvitz_thompson(const WeightedSample& s, Estimand target = Estimand::mean);

// Throws Error(Errc::empty_sample) when no unit responded.
IpwDiagnostics hajek(const WeightedSample& s, Estimand target = Estimand::mean);

// Throws Error(Errc::degenerate_mix) when (1 - lambda) n + lambda N == 0.
IpwDiagnostics trotter_tukey(const WeightedSample& s, double lambda, Estimand target = Estimand::mean);

// gamma is the plug-in ratio cov(r y / p, r / p) / var(r / p) with n - 1
// divisors. Falls back to Hajek when n < 2 or the weights r/p are constant.
IpwDiagnostics adaptive_normalization(const WeightedSample& s, Estimand target = Estimand::mean);

// (sum_k a_k) * (sum y_k / p_k) / (sum a_k / p_k), inner sums over responders.
// Throws Error(Errc::configuration) without auxiliaries and
// Error(Errc::empty_sample) when the responder sum of a/p is zero.
double hajek_ratio_total(const WeightedSample& s);

} // namespace ipwmc
