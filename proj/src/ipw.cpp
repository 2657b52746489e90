#include "ipwmc/ipw.hpp"

#include "ipwmc/error.hpp"
#include "ipwmc/summary.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ipwmc {

namespace {

struct WeightedSums {
    double s_hat = 0.0;
    double n_hat = 0.0;
    std::size_t responders = 0;
};

WeightedSums weighted_sums(const WeightedSample& s) {
    s.validate();
    WeightedSums out;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (!s.r[k]) continue;
        if (s.p[k] == 0.0) {
            throw Error(Errc::division_hazard,
                        "unit " + std::to_string(k) + " responded with zero inclusion probability");
        }
        out.s_hat += s.y[k] / s.p[k];
        out.n_hat += 1.0 / s.p[k];
        ++out.responders;
    }
    return out;
}

double scale_for(Estimand target, std::size_t n) {
    return target == Estimand::total ? static_cast<double>(n) : 1.0;
}

} // namespace

WeightedSample WeightedSample::observed(std::vector<double> y, std::vector<double> p) {
    WeightedSample s;
    s.r.assign(y.size(), 1);
    s.y = std::move(y);
    s.p = std::move(p);
    return s;
}

void WeightedSample::validate() const {
    const std::size_t n = y.size();
    if (n == 0) throw Error(Errc::domain, "weighted sample is empty");
    if (p.size() != n || r.size() != n) {
        throw Error(Errc::domain, "weighted sample: y, p and r must have equal length");
    }
    if (a && a->size() != n) throw Error(Errc::domain, "weighted sample: auxiliary length mismatch");
    for (std::size_t k = 0; k < n; ++k) {
        if (!(p[k] >= 0.0 && p[k] <= 1.0)) {
            throw Error(Errc::domain, "weighted sample: p[" + std::to_string(k) + "] outside [0,1]");
        }
        if (r[k] > 1) throw Error(Errc::domain, "weighted sample: r must be 0 or 1");
        if (a && !((*a)[k] > 0.0)) {
            throw Error(Errc::domain, "weighted sample: auxiliaries must be positive");
        }
    }
}

IpwDiagnostics horvitz_thompson(const WeightedSample& s, Estimand target) {
    const auto sums = weighted_sums(s);
    const double n = static_cast<double>(s.size());
    const double est = target == Estimand::total ? sums.s_hat : sums.s_hat / n;
    return {sums.s_hat, sums.n_hat, 0.0, est};
}

IpwDiagnostics hajek(const WeightedSample& s, Estimand target) {
    const auto sums = weighted_sums(s);
    if (sums.n_hat == 0.0) throw Error(Errc::empty_sample, "hajek: no responding units");
    const double est = scale_for(target, s.size()) * (sums.s_hat / sums.n_hat);
    return {sums.s_hat, sums.n_hat, 1.0, est};
}

IpwDiagnostics trotter_tukey(const WeightedSample& s, double lambda, Estimand target) {
    const auto sums = weighted_sums(s);
    const double n = static_cast<double>(s.size());
    const double denom = (1.0 - lambda) * n + lambda * sums.n_hat;
    if (denom == 0.0) throw Error(Errc::degenerate_mix, "trotter_tukey: zero denominator");
    const double est = scale_for(target, s.size()) * (sums.s_hat / denom);
    return {sums.s_hat, sums.n_hat, lambda, est};
}

IpwDiagnostics adaptive_normalization(const WeightedSample& s, Estimand target) {
    const auto sums = weighted_sums(s);
    const std::size_t n_units = s.size();
    const double n = static_cast<double>(n_units);

    std::vector<double> wy(n_units), w(n_units);
    for (std::size_t k = 0; k < n_units; ++k) {
        w[k] = s.r[k] ? 1.0 / s.p[k] : 0.0;
        wy[k] = w[k] * s.y[k];
    }
    const double var_w = n_units >= 2 ? sample_variance(w) : 0.0;
    if (!(var_w > 0.0)) {
        if (sums.n_hat == 0.0) throw Error(Errc::empty_sample, "adaptive_normalization: no responding units");
        return {sums.s_hat, sums.n_hat, 1.0, scale_for(target, n_units) * (sums.s_hat / sums.n_hat)};
    }

    const double gamma = sample_covariance(wy, w) / var_w;
    const double mean_est = sums.s_hat / n + gamma * (1.0 - sums.n_hat / n);

    // lambda solving S / ((1 - lambda) n + lambda N) = mean_est
    double lambda = std::numeric_limits<double>::quiet_NaN();
    if (sums.n_hat == n) {
        lambda = 0.0;
    } else if (mean_est != 0.0) {
        lambda = (sums.s_hat / mean_est - n) / (sums.n_hat - n);
    }
    return {sums.s_hat, sums.n_hat, lambda, scale_for(target, n_units) * mean_est};
}

double hajek_ratio_total(const WeightedSample& s) {
    if (!s.a) throw Error(Errc::configuration, "hajek_ratio_total: auxiliaries required");
    static_cast<void>(weighted_sums(s)); // validation and zero-p responders
    double a_total = 0.0, a_weighted = 0.0, y_weighted = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double ak = (*s.a)[k];
        a_total += ak;
        if (!s.r[k]) continue;
        a_weighted += ak / s.p[k];
        y_weighted += s.y[k] / s.p[k];
    }
    if (!(a_weighted > 0.0)) throw Error(Errc::empty_sample, "hajek_ratio_total: no responding units");
    return a_total * (y_weighted / a_weighted);
}

} // namespace ipwmc
