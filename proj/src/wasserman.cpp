#include "ipwmc/wasserman.hpp"

#include "ipwmc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ipwmc::wasserman {

namespace {

// Shifted by the first element so a constant vector returns that constant exactly.
double mean_of(std::span<const double> v) {
    const double base = v.front();
    double dev = 0.0;
    for (double x : v) dev += x - base;
    return base + dev / static_cast<double>(v.size());
}

void require_same_draws(const Draws& draws, const BinPartition& part) {
    const auto total = std::accumulate(part.counts.begin(), part.counts.end(), std::uint64_t{0});
    if (total != draws.size()) {
        throw Error(Errc::domain, "bin partition was built from a different set of draws");
    }
}

} // namespace

void Config::validate() const {
    if (B == 0) throw Error(Errc::configuration, "B must be positive");
    if (n == 0) throw Error(Errc::configuration, "n must be positive");
    if (!(delta > 0.0 && delta < 0.5)) throw Error(Errc::configuration, "delta must lie in (0, 0.5)");
    if (!(theta_lo >= 0.0 && theta_lo <= theta_hi && theta_hi <= 1.0)) {
        throw Error(Errc::configuration, "theta range must satisfy 0 <= theta_lo <= theta_hi <= 1");
    }
    if (!(alpha_f > 0.0)) throw Error(Errc::configuration, "alpha_f must be positive");
    if (k_bins < 2) throw Error(Errc::configuration, "k_bins must be at least 2");
}

Population::Population(std::vector<double> theta, std::vector<double> p)
    : theta_(std::move(theta)), p_(std::move(p)) {
    if (theta_.empty() || theta_.size() != p_.size()) {
        throw Error(Errc::domain, "population needs equal, non-zero numbers of theta and p values");
    }
    for (double pb : p_) {
        if (!(pb > 0.0 && pb <= 1.0)) throw Error(Errc::domain, "population p values must lie in (0, 1]");
    }
    for (double tb : theta_) {
        if (!(tb >= 0.0 && tb <= 1.0)) throw Error(Errc::domain, "population theta values must lie in [0, 1]");
    }
}

double Population::psi() const noexcept { return mean_of(theta_); }

double Population::p_bar() const noexcept { return mean_of(p_); }

double Population::theta_p_bar() const noexcept {
    double s = 0.0;
    for (std::size_t b = 0; b < theta_.size(); ++b) s += theta_[b] * p_[b];
    return s / static_cast<double>(theta_.size());
}

std::uint64_t Draws::responders() const noexcept {
    return std::accumulate(r.begin(), r.end(), std::uint64_t{0});
}

std::uint64_t Draws::successes() const noexcept {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r[i] & y[i];
    return s;
}

Population generate_population(const Config& cfg, RandomStream& stream) {
    cfg.validate();
    std::vector<double> theta(cfg.B), p(cfg.B);
    for (auto& t : theta) t = uniform(stream, cfg.theta_lo, cfg.theta_hi);
    for (auto& pb : p) pb = uniform(stream, cfg.delta, 1.0 - cfg.delta);
    return Population(std::move(theta), std::move(p));
}

Draws simulate_draws(const Population& pop, std::uint64_t n, RandomStream& stream) {
    Draws d;
    d.x.resize(n);
    d.r.resize(n);
    d.y.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto label = static_cast<std::uint32_t>(discrete_uniform(stream, pop.size()) - 1);
        d.x[i] = label;
        d.r[i] = static_cast<std::uint8_t>(bernoulli(stream, pop.p()[label]));
        d.y[i] = d.r[i] ? static_cast<std::uint8_t>(bernoulli(stream, pop.theta()[label])) : 0;
    }
    return d;
}

WeightedSample to_weighted_sample(const Draws& draws, const Population& pop) {
    WeightedSample s;
    s.y.resize(draws.size());
    s.p.resize(draws.size());
    s.r = draws.r;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        s.y[i] = draws.y[i];
        s.p[i] = pop.p()[draws.x[i]];
    }
    return s;
}

double ht_wasserman(const Draws& draws, const Population& pop) {
    double s = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        if (draws.r[i] && draws.y[i]) s += 1.0 / pop.p()[draws.x[i]];
    }
    return s / static_cast<double>(draws.size());
}

double hajek_wasserman(const Draws& draws, const Population& pop) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        if (!draws.r[i]) continue;
        const double w = 1.0 / pop.p()[draws.x[i]];
        den += w;
        if (draws.y[i]) num += w;
    }
    if (den == 0.0) throw Error(Errc::empty_sample, "hajek: no responding draws");
    return num / den;
}

double bayes_li(const Draws& draws, double alpha_f) {
    if (!(alpha_f > 0.0)) throw Error(Errc::domain, "bayes_li: alpha_f must be positive");
    const double ry = static_cast<double>(draws.successes());
    const double r = static_cast<double>(draws.responders());
    return (ry + alpha_f) / (r + 2.0 * alpha_f);
}

std::size_t BinPartition::bin_of(double p) const noexcept {
    const auto it = std::upper_bound(edges.begin(), edges.end(), p);
    if (it == edges.begin()) return 0;
    return std::min<std::size_t>(static_cast<std::size_t>(it - edges.begin()) - 1, k() - 1);
}

BinPartition bin_partition(const Draws& draws, const Population& pop, std::uint64_t k, double delta) {
    if (k < 2) throw Error(Errc::configuration, "bin_partition: need at least two bins");
    if (!(delta > 0.0 && delta < 0.5)) throw Error(Errc::configuration, "bin_partition: delta must lie in (0, 0.5)");

    BinPartition part;
    part.edges.resize(k + 1);
    const double width = (1.0 - 2.0 * delta) / static_cast<double>(k);
    for (std::uint64_t j = 0; j < k; ++j) part.edges[j] = delta + static_cast<double>(j) * width;
    part.edges[k] = 1.0 - delta;
    part.counts.assign(k, 0);

    std::vector<double> sums(k, 0.0);
    for (std::uint32_t label : draws.x) {
        const double p = pop.p()[label];
        const auto j = part.bin_of(p);
        ++part.counts[j];
        sums[j] += p;
    }
    part.p_tilde.resize(k);
    for (std::uint64_t j = 0; j < k; ++j) {
        part.p_tilde[j] = part.counts[j] > 0 ? sums[j] / static_cast<double>(part.counts[j])
                                             : 0.5 * (part.edges[j] + part.edges[j + 1]);
    }
    return part;
}

double bs_ht(const Draws& draws, const Population& pop, const BinPartition& part) {
    require_same_draws(draws, part);
    std::vector<double> ry(part.k(), 0.0);
    for (std::size_t i = 0; i < draws.size(); ++i) {
        if (draws.r[i] && draws.y[i]) ry[part.bin_of(pop.p()[draws.x[i]])] += 1.0;
    }
    double s = 0.0;
    for (std::size_t j = 0; j < part.k(); ++j) {
        if (part.counts[j] > 0) s += ry[j] / part.p_tilde[j];
    }
    return s / static_cast<double>(draws.size());
}

double bs_hajek(const Draws& draws, const Population& pop, const BinPartition& part) {
    require_same_draws(draws, part);
    std::vector<double> ry(part.k(), 0.0), rr(part.k(), 0.0);
    for (std::size_t i = 0; i < draws.size(); ++i) {
        if (!draws.r[i]) continue;
        const auto j = part.bin_of(pop.p()[draws.x[i]]);
        rr[j] += 1.0;
        if (draws.y[i]) ry[j] += 1.0;
    }
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < part.k(); ++j) {
        num += ry[j] / part.p_tilde[j];
        den += rr[j] / part.p_tilde[j];
    }
    if (den == 0.0) throw Error(Errc::empty_sample, "bs_hajek: no responding draws");
    return num / den;
}

DeltaMoments delta_moments(const Population& pop, std::uint64_t n) {
    const double nn = static_cast<double>(n);
    const double psi = pop.psi();
    const double p_bar = pop.p_bar();
    const double tp_bar = pop.theta_p_bar();

    const double mu_num = nn * psi * p_bar + 1.0;
    const double mu_den = nn * p_bar + 2.0;
    const double var_num = nn * (tp_bar - tp_bar * tp_bar);
    const double var_den = nn * (p_bar - p_bar * p_bar);
    // Per draw: E[R Y R] - E[R Y] E[R] = tp_bar - tp_bar * p_bar.
    const double cov = nn * tp_bar * (1.0 - p_bar);

    DeltaMoments m;
    m.e_bayes = mu_num / mu_den;
    m.cov_num_den = cov;
    const double ratio = mu_num / mu_den;
    m.v_bayes = ratio * ratio *
                (var_num / (mu_num * mu_num) + var_den / (mu_den * mu_den) - 2.0 * cov / (mu_num * mu_den));

    double inv = 0.0;
    for (std::size_t b = 0; b < pop.size(); ++b) inv += pop.theta()[b] / pop.p()[b];
    m.v_ht = (inv / static_cast<double>(pop.size()) - psi * psi) / nn;
    return m;
}

double printed_covariance(const Population& pop, std::uint64_t n) {
    const double nn = static_cast<double>(n);
    const double p_bar = pop.p_bar();
    return pop.psi() * nn * p_bar * (1.0 - nn * p_bar);
}

double HarmelingEstimates::mle_value() const {
    if (!mle) throw Error(Errc::empty_sample, "harmeling: MLE undefined without responders");
    return *mle;
}

HarmelingEstimates harmeling_estimates(std::span<const double> y, std::span<const std::uint8_t> r, double sigma) {
    if (y.size() != r.size()) throw Error(Errc::domain, "harmeling: y and r lengths differ");
    if (!(sigma > 0.0)) throw Error(Errc::domain, "harmeling: sigma must be positive");
    double sum_r = 0.0, sum_ry = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!r[i]) continue;
        sum_r += 1.0;
        sum_ry += y[i];
    }
    HarmelingEstimates out;
    if (sum_r > 0.0) out.mle = sum_ry / sum_r;
    out.bayes = sum_ry / (2.0 / sigma + sum_r);
    return out;
}

double hoeffding_tail_bound(std::uint64_t n, double delta, double psi, double eps) {
    if (!(eps > 0.0)) throw Error(Errc::domain, "hoeffding_tail_bound: eps must be positive");
    const double t = psi + eps;
    return std::exp(-2.0 * static_cast<double>(n) * delta * delta * t * t);
}

} // namespace ipwmc::wasserman
