#include "ipwmc/evidence.hpp"

#include "ipwmc/error.hpp"
#include "ipwmc/summary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace ipwmc::evidence {

namespace {

void require_paired(const ISDraws& draws, std::span<const double> l_vals) {
    if (draws.w.size() != draws.y.size() || l_vals.size() != draws.w.size()) {
        throw Error(Errc::domain, "importance draws, weights and integrand values must have equal length");
    }
    if (draws.w.empty()) throw Error(Errc::domain, "importance draws are empty");
}

double weight_sum(const ISDraws& draws) {
    return std::accumulate(draws.w.begin(), draws.w.end(), 0.0);
}

double weighted_sum(const ISDraws& draws, std::span<const double> l_vals) {
    double s = 0.0;
    for (std::size_t i = 0; i < l_vals.size(); ++i) s += l_vals[i] * draws.w[i];
    return s;
}

// Sorted copy of the points with the domain endpoints added.
std::vector<double> closed_grid(std::span<const double> points, const IntegrandProblem& prob) {
    if (!prob.domain) throw Error(Errc::domain, "riemann estimators need a bounded domain");
    const auto [lo, hi] = *prob.domain;
    if (!(lo < hi)) throw Error(Errc::degenerate_grid, "riemann estimators need lo < hi");

    std::vector<double> u(points.begin(), points.end());
    for (double x : u) {
        if (!(x >= lo && x <= hi)) {
            throw Error(Errc::domain, "point " + std::to_string(x) + " lies outside the integration domain");
        }
    }
    std::sort(u.begin(), u.end());
    if (u.empty() || u.front() > lo) u.insert(u.begin(), lo);
    if (u.back() < hi) u.push_back(hi);
    return u;
}

bool has_two_distinct(std::span<const double> sorted) {
    return sorted.size() >= 2 && sorted.front() < sorted.back();
}

} // namespace

ISDraws draw_importance(const IntegrandProblem& prob, std::size_t n, RandomStream& stream) {
    ISDraws d;
    d.y.resize(n);
    d.w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = prob.g.sample(stream);
        const double fy = prob.f(y);
        const double gy = prob.g.density(y);
        if (!(gy > 0.0)) {
            if (fy != 0.0) throw Error(Errc::domain, "proposal density vanishes where f does not");
            d.w[i] = 0.0;
        } else {
            d.w[i] = fy / gy;
        }
        d.y[i] = y;
    }
    return d;
}

std::vector<double> evaluate(const RealFn& fn, std::span<const double> points) {
    std::vector<double> out(points.size());
    std::transform(points.begin(), points.end(), out.begin(), [&](double x) { return fn(x); });
    return out;
}

double is_estimate(const IntegrandProblem& prob, const ISDraws& draws) {
    return is_estimate(draws, evaluate(prob.l, draws.y));
}

double is_estimate(const ISDraws& draws, std::span<const double> l_vals) {
    require_paired(draws, l_vals);
    return weighted_sum(draws, l_vals) / static_cast<double>(draws.size());
}

double snis_estimate(const ISDraws& draws, std::span<const double> l_vals) {
    require_paired(draws, l_vals);
    const double sw = weight_sum(draws);
    if (!(sw > 0.0)) throw Error(Errc::degenerate_weights, "snis: importance weights sum to zero");
    return weighted_sum(draws, l_vals) / sw;
}

double regression_estimate(const ISDraws& draws, std::span<const double> l_vals) {
    require_paired(draws, l_vals);
    if (draws.size() < 2) throw Error(Errc::domain, "regression_estimate needs at least two draws");
    const double n = static_cast<double>(draws.size());
    const double w_bar = weight_sum(draws) / n;
    double ss = 0.0;
    for (double w : draws.w) ss += (w - w_bar) * (w - w_bar);
    if (ss == 0.0) return snis_estimate(draws, l_vals);

    const double b = (1.0 - w_bar) / (ss / n);
    double est = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        const double v = draws.w[i] * (1.0 + b * (draws.w[i] - w_bar)) / n;
        est += v * l_vals[i];
    }
    return est;
}

double difference_estimate(const ISDraws& draws, std::span<const double> l_vals, double gamma) {
    const double is = is_estimate(draws, l_vals);
    const double w_bar = weight_sum(draws) / static_cast<double>(draws.size());
    return is + gamma * (1.0 - w_bar);
}

double optimal_difference_gamma(const ISDraws& draws, std::span<const double> l_vals) {
    require_paired(draws, l_vals);
    if (draws.size() < 2) return 0.0;
    const double var_w = sample_variance(draws.w);
    if (!(var_w > 0.0)) return 0.0;
    std::vector<double> lw(draws.size());
    for (std::size_t i = 0; i < lw.size(); ++i) lw[i] = l_vals[i] * draws.w[i];
    return sample_covariance(lw, draws.w) / var_w;
}

double an_is_estimate(const ISDraws& draws, std::span<const double> l_vals, double lambda) {
    require_paired(draws, l_vals);
    const double n = static_cast<double>(draws.size());
    const double denom = lambda * n + (1.0 - lambda) * weight_sum(draws);
    if (denom == 0.0) throw Error(Errc::degenerate_mix, "an_is_estimate: zero denominator");
    return weighted_sum(draws, l_vals) / denom;
}

double riemann_estimate(std::span<const double> points, const IntegrandProblem& prob) {
    const auto u = closed_grid(points, prob);
    if (!has_two_distinct(u)) throw Error(Errc::degenerate_grid, "riemann: fewer than two distinct points");
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) s += (u[i + 1] - u[i]) * prob.l(u[i]) * prob.f(u[i]);
    return s;
}

double trapezoid_estimate(std::span<const double> points, const IntegrandProblem& prob) {
    const auto u = closed_grid(points, prob);
    if (!has_two_distinct(u)) throw Error(Errc::degenerate_grid, "trapezoid: fewer than two distinct points");
    double s = 0.0;
    double h_left = prob.l(u[0]) * prob.f(u[0]);
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        const double h_right = prob.l(u[i + 1]) * prob.f(u[i + 1]);
        s += 0.5 * (u[i + 1] - u[i]) * (h_left + h_right);
        h_left = h_right;
    }
    return s;
}

double riemann_snis_estimate(std::span<const double> points, const RealFn& l, const RealFn& f_tilde) {
    std::vector<double> u(points.begin(), points.end());
    std::sort(u.begin(), u.end());
    if (!has_two_distinct(u)) throw Error(Errc::degenerate_grid, "riemann_snis: fewer than two distinct points");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        const double mass = (u[i + 1] - u[i]) * f_tilde(u[i]);
        num += mass * l(u[i]);
        den += mass;
    }
    if (!(den > 0.0)) throw Error(Errc::degenerate_weights, "riemann_snis: denominator is not positive");
    return num / den;
}

double lambda_inverse(const SurvivalFunction& zfun, double a) {
    if (!(a > 0.0 && a < 1.0)) throw Error(Errc::domain, "lambda_inverse: a must lie in (0, 1)");
    if (!(zfun.lambda_max > 0.0)) throw Error(Errc::domain, "lambda_inverse: lambda_max must be positive");

    constexpr int kScan = 32;
    double prev = zfun.z(0.0);
    for (int j = 1; j <= kScan; ++j) {
        const double cur = zfun.z(zfun.lambda_max * j / kScan);
        if (cur > prev) throw Error(Errc::invalid_survival, "survival function increases");
        prev = cur;
    }

    double lo = 0.0, hi = zfun.lambda_max;
    double z_lo = zfun.z(lo), z_hi = zfun.z(hi);
    if (!(z_lo > a)) return 0.0;
    if (z_hi > a) return hi;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double z_mid = zfun.z(mid);
        if (z_mid > z_lo || z_mid < z_hi) throw Error(Errc::invalid_survival, "survival function increases");
        if (z_mid > a) {
            lo = mid;
            z_lo = z_mid;
        } else {
            hi = mid;
            z_hi = z_mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> nested_grid(std::size_t m, double K) {
    if (m == 0) throw Error(Errc::domain, "nested_grid: m must be positive");
    if (!(K > 0.0)) throw Error(Errc::domain, "nested_grid: K must be positive");
    std::vector<double> a(m + 1);
    a[0] = 1.0;
    for (std::size_t i = 1; i <= m; ++i) a[i] = std::exp(-static_cast<double>(i) / K);
    return a;
}

double nested_quadrature(const SurvivalFunction& zfun, std::size_t m, double K) {
    const auto a = nested_grid(m, K);
    double s = 0.0;
    for (std::size_t i = 1; i <= m; ++i) {
        const double ai = std::max(a[i], std::numeric_limits<double>::min());
        s += (a[i - 1] - a[i]) * lambda_inverse(zfun, ai);
    }
    return s;
}

} // namespace ipwmc::evidence
