#pragma once
// Monte Carlo estimators of psi = E_f[l(X)] = integral of l f.
//
// Importance sampling draws y_i from a proposal g and weights them by
// W_i = f(y_i) / g(y_i). The ratio, regression, difference and adaptively
// normalized variants all reuse those weights. Riemann and trapezoid sums
// order the points instead of averaging them, and the vertical-likelihood
// (nested) quadrature integrates the inverse survival function of l(X).

#include "ipwmc/random_stream.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace ipwmc::evidence {

using RealFn = std::function<double(double)>;

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

struct Proposal {
    std::function<double(RandomStream&)> sample;
    RealFn density;
};

struct IntegrandProblem {
    RealFn l;
    RealFn f;
    bool normalized = true;         // false: f is known only up to a constant
    Proposal g;
    std::optional<Interval> domain; // empty for an unbounded domain
};

struct ISDraws {
    std::vector<double> y;
    std::vector<double> w;

    std::size_t size() const noexcept { return y.size(); }
};

// n points from prob.g with weights f/g. Throws Error(Errc::domain) if g
// vanishes at a point where f does not.
ISDraws draw_importance(const IntegrandProblem& prob, std::size_t n, RandomStream& stream);

// l(y_i) for every draw.
std::vector<double> evaluate(const RealFn& fn, std::span<const double> points);

// (1/n) sum l(y_i) W_i
double is_estimate(const IntegrandProblem& prob, const ISDraws& draws);
double is_estimate(const ISDraws& draws, std::span<const double> l_vals);

// sum l W / sum W. Throws Error(Errc::degenerate_weights) if the weights sum to zero.
double snis_estimate(const ISDraws& draws, std::span<const double> l_vals);

// sum_i W_i (1 + b (W_i - Wbar)) l_i / n with b = (1 - Wbar) / mean((W - Wbar)^2).
// Falls back to snis_estimate when the weights are constant.
double regression_estimate(const ISDraws& draws, std::span<const double> l_vals);

// is_estimate + gamma (1 - Wbar)
double difference_estimate(const ISDraws& draws, std::span<const double> l_vals, double gamma);

// Plug-in gamma = cov(l W, W) / var(W); 0 when the weights are constant.
double optimal_difference_gamma(const ISDraws& draws, std::span<const double> l_vals);

// sum l W / (lambda n + (1 - lambda) sum W). lambda = 1 is plain IS,
// lambda = 0 is SNIS. Throws Error(Errc::degenerate_mix) on a zero denominator.
double an_is_estimate(const ISDraws& draws, std::span<const double> l_vals, double lambda);

// Left Riemann sum of l f over the sorted points with the domain endpoints
// inserted when absent:  sum_{i<n} (u_[i+1] - u_[i]) l(u_[i]) f(u_[i]).
// Throws Error(Errc::domain) for an unbounded domain or points outside it,
// and Error(Errc::degenerate_grid) with fewer than two distinct points.
double riemann_estimate(std::span<const double> points, const IntegrandProblem& prob);

// Same grid as riemann_estimate with trapezoid weights (u_[i+1] - u_[i]) (h_i + h_{i+1}) / 2.
double trapezoid_estimate(std::span<const double> points, const IntegrandProblem& prob);

// Ratio of left Riemann sums of l f_tilde and f_tilde over the sorted points.
// Throws Error(Errc::degenerate_grid) with fewer than two distinct points and
// Error(Errc::degenerate_weights) when the denominator is not positive.
double riemann_snis_estimate(std::span<const double> points, const RealFn& l, const RealFn& f_tilde);

struct SurvivalFunction {
    RealFn z;                 // lambda -> P(lambda < l(X)), non-increasing
    double lambda_max = 1.0;  // z(lambda) = 0 beyond this point
};

// Lambda(a) = sup{lambda : Z(lambda) > a}, by bisection on [0, lambda_max]
// to 1e-12 absolute tolerance (at most 200 steps). Throws
// Error(Errc::domain) unless 0 < a < 1 and Error(Errc::invalid_survival) if
// Z is found to increase.
double lambda_inverse(const SurvivalFunction& zfun, double a);

// sum_{i=1..m} (a_{i-1} - a_i) Lambda(a_i) on the grid a_i = exp(-i / K), a_0 = 1.
double nested_quadrature(const SurvivalFunction& zfun, std::size_t m, double K);

// a_0 = 1, a_i = exp(-i / K) for i = 1..m
std::vector<double> nested_grid(std::size_t m, double K);

} // namespace ipwmc::evidence
