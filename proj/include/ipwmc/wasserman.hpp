#pragma once
// The Robins-Ritov-Wasserman missing-data model and the estimators compared
// on it.
//
// A population carries B pairs (theta_b, p_b). Each of n draws picks a label
// X uniformly, observes R ~ Bernoulli(p_X) and, when R = 1, Y ~ Bernoulli(theta_X).
// The target is psi = mean(theta).
//
// Labels in Draws are 0-based indices into the population.

#include "ipwmc/ipw.hpp"
#include "ipwmc/random_stream.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ipwmc::wasserman {

struct Config {
    std::uint64_t B = 1000;
    std::uint64_t n = 100;
    double delta = 0.01;
    double theta_lo = 0.1;
    double theta_hi = 0.9;
    double alpha_f = 1.0;
    std::uint64_t k_bins = 5;

    // Throws Error(Errc::configuration) on an invalid combination.
    void validate() const;
};

class Population {
public:
    Population(std::vector<double> theta, std::vector<double> p);

    std::span<const double> theta() const noexcept { return theta_; }
    std::span<const double> p() const noexcept { return p_; }
    std::size_t size() const noexcept { return theta_.size(); }

    // Recomputed from theta on every call.
    double psi() const noexcept;
    double p_bar() const noexcept;
    // mean of theta_b * p_b
    double theta_p_bar() const noexcept;

private:
    std::vector<double> theta_;
    std::vector<double> p_;
};

struct Draws {
    std::vector<std::uint32_t> x;
    std::vector<std::uint8_t> r;
    std::vector<std::uint8_t> y;

    std::size_t size() const noexcept { return x.size(); }
    std::uint64_t responders() const noexcept;
    std::uint64_t successes() const noexcept; // sum of r_i y_i
};

Population generate_population(const Config& cfg, RandomStream& stream);

Draws simulate_draws(const Population& pop, std::uint64_t n, RandomStream& stream);

// The draws as a generic survey sample: y_i, p_{X_i}, r_i.
WeightedSample to_weighted_sample(const Draws& draws, const Population& pop);

// (1/n) sum R_i Y_i / p_{X_i}
double ht_wasserman(const Draws& draws, const Population& pop);

// Hajek on the draws; throws Error(Errc::empty_sample) without responders.
double hajek_wasserman(const Draws& draws, const Population& pop);

// Posterior mean under exchangeable Beta priors:
// (sum R_i Y_i + alpha_f) / (sum R_i + 2 alpha_f).
double bayes_li(const Draws& draws, double alpha_f = 1.0);

struct BinPartition {
    std::vector<double> edges;         // k + 1 equally spaced, edges[0] = delta, edges[k] = 1 - delta
    std::vector<std::uint64_t> counts; // draws per bin
    std::vector<double> p_tilde;       // mean p per bin, midpoint when empty

    std::size_t k() const noexcept { return counts.size(); }
    // Half-open bins [e_j, e_{j+1}); values at or beyond the last edge go to
    // the last bin, values below delta to the first.
    std::size_t bin_of(double p) const noexcept;
};

// Throws Error(Errc::configuration) if k < 2 or delta outside (0, 0.5).
BinPartition bin_partition(const Draws& draws, const Population& pop, std::uint64_t k, double delta);

// (1/n) sum_j (sum_{i in j} R_i Y_i) / p_tilde_j
double bs_ht(const Draws& draws, const Population& pop, const BinPartition& part);

// sum_j (sum_{i in j} R_i Y_i)/p_tilde_j / sum_j (sum_{i in j} R_i)/p_tilde_j.
// Throws Error(Errc::empty_sample) without responders.
double bs_hajek(const Draws& draws, const Population& pop, const BinPartition& part);

// First-order (delta-method) moments of the alpha_f = 1 Bayes estimator and
// the exact HT variance, for n draws from pop.
struct DeltaMoments {
    double e_bayes = 0.0;
    double v_bayes = 0.0;
    double v_ht = 0.0;
    double cov_num_den = 0.0; // Cov(sum R_i Y_i, sum R_i) used inside v_bayes
};

DeltaMoments delta_moments(const Population& pop, std::uint64_t n);

// Cov(sum R_i Y_i, sum R_i) in the form n psi p_bar (1 - n p_bar). Kept for
// comparison only; it does not match the simulated covariance.
double printed_covariance(const Population& pop, std::uint64_t n);

// Normal-outcome variant with a N(0, sigma) prior on every theta_b, B -> inf.
struct HarmelingEstimates {
    std::optional<double> mle; // empty when no unit responded
    double bayes = 0.0;

    // Throws Error(Errc::empty_sample) when the MLE is undefined.
    double mle_value() const;
};

HarmelingEstimates harmeling_estimates(std::span<const double> y, std::span<const std::uint8_t> r, double sigma);

// exp(-2 n delta^2 (psi + eps)^2)
double hoeffding_tail_bound(std::uint64_t n, double delta, double psi, double eps);

} // namespace ipwmc::wasserman
