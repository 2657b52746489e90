#include "ipwmc/semiparam.hpp"

#include "ipwmc/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace ipwmc::semiparam {

namespace {

// Inner denominator sum_r n_r l_r(x_i) / psi_r for every draw.
std::vector<double> denominators(const SemiparamData& data, std::span<const double> psi) {
    std::vector<double> d(data.n());
    for (std::size_t i = 0; i < data.n(); ++i) {
        double s = 0.0;
        for (std::size_t r = 0; r < data.k(); ++r) {
            s += static_cast<double>(data.counts()[r]) * data.l(i, r) / psi[r];
        }
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw Error(Errc::support_violation, "draw " + std::to_string(i) + " has a zero denominator");
        }
        d[i] = s;
    }
    return d;
}

} // namespace

SemiparamData::SemiparamData(std::size_t k, std::vector<std::size_t> labels, std::vector<double> values)
    : k_(k), labels_(std::move(labels)), values_(std::move(values)) {
    if (k_ == 0) throw Error(Errc::domain, "semiparam: k must be positive");
    if (labels_.empty()) throw Error(Errc::domain, "semiparam: no draws");
    if (values_.size() != labels_.size() * k_) throw Error(Errc::domain, "semiparam: value matrix is not n x k");
    counts_.assign(k_, 0);
    for (std::size_t label : labels_) {
        if (label >= k_) throw Error(Errc::domain, "semiparam: label out of range");
        ++counts_[label];
    }
    for (std::size_t r = 0; r < k_; ++r) {
        if (counts_[r] == 0) throw Error(Errc::domain, "semiparam: sampler " + std::to_string(r) + " has no draws");
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        const auto rw = row(i);
        if (std::any_of(rw.begin(), rw.end(), [](double v) { return !(v >= 0.0) || !std::isfinite(v); })) {
            throw Error(Errc::domain, "semiparam: function values must be finite and non-negative");
        }
        if (std::none_of(rw.begin(), rw.end(), [](double v) { return v > 0.0; })) {
            throw Error(Errc::support_violation, "semiparam: draw " + std::to_string(i) + " has no positive value");
        }
    }
}

MleSolution ips_solve(const SemiparamData& data, const SolveOptions& opts) {
    const std::size_t k = data.k();
    if (opts.anchor >= k) throw Error(Errc::domain, "ips_solve: anchor out of range");
    if (!(opts.tol > 0.0)) throw Error(Errc::domain, "ips_solve: tolerance must be positive");

    std::vector<double> psi(k, 1.0);
    if (opts.initial) {
        if (opts.initial->size() != k) throw Error(Errc::domain, "ips_solve: initial iterate has wrong length");
        psi = *opts.initial;
        for (double v : psi) {
            if (!(v > 0.0) || !std::isfinite(v)) throw Error(Errc::domain, "ips_solve: initial iterate must be positive");
        }
        const double a = psi[opts.anchor];
        for (double& v : psi) v /= a;
    }

    MleSolution sol;
    sol.anchor = opts.anchor;
    std::vector<double> next(k);
    while (sol.iterations < opts.max_iter) {
        const auto d = denominators(data, psi);
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < data.n(); ++i) {
            for (std::size_t s = 0; s < k; ++s) next[s] += data.l(i, s) / d[i];
        }
        for (std::size_t s = 0; s < k; ++s) {
            if (!(next[s] > 0.0)) {
                throw Error(Errc::support_violation, "sampler " + std::to_string(s) + " has no mass on the draws");
            }
        }
        const double pin = next[opts.anchor];
        double change = 0.0;
        for (std::size_t s = 0; s < k; ++s) {
            next[s] = s == opts.anchor ? 1.0 : next[s] / pin;
            change = std::max(change, std::abs(next[s] - psi[s]) / next[s]);
        }
        psi.swap(next);
        ++sol.iterations;
        sol.residual = change;
        sol.residual_history.push_back(change);
        if (change < opts.tol) {
            sol.converged = true;
            break;
        }
    }

    const auto d = denominators(data, psi);
    sol.f_masses.resize(data.n());
    for (std::size_t i = 0; i < data.n(); ++i) sol.f_masses[i] = 1.0 / d[i];
    sol.psi_hat = std::move(psi);
    return sol;
}

double ratio_estimate(const MleSolution& sol, std::size_t r, std::size_t s) {
    if (r >= sol.psi_hat.size() || s >= sol.psi_hat.size()) throw Error(Errc::domain, "ratio_estimate: index out of range");
    if (r == s) return 1.0;
    return sol.psi_hat[r] / sol.psi_hat[s];
}

ScalingTotals scaling_totals(const SemiparamData& data, const MleSolution& sol) {
    ScalingTotals t;
    t.sampler_totals.assign(data.k(), 0.0);
    t.draw_totals.assign(data.n(), 0.0);
    for (std::size_t i = 0; i < data.n(); ++i) {
        for (std::size_t r = 0; r < data.k(); ++r) {
            const double cell =
                static_cast<double>(data.counts()[r]) * data.l(i, r) * sol.f_masses[i] / sol.psi_hat[r];
            t.sampler_totals[r] += cell;
            t.draw_totals[i] += cell;
        }
    }
    return t;
}

SemiparamInstance read_instance(std::istream& in) {
    std::size_t n = 0, k = 0, anchor = 0;
    if (!(in >> n >> k >> anchor)) throw Error(Errc::io, "semiparam file: malformed header, expected 'n k anchor'");
    if (k == 0 || anchor < 1 || anchor > k) throw Error(Errc::configuration, "semiparam file: anchor must lie in 1..k");
    std::vector<std::size_t> labels(n);
    std::vector<double> values(n * k);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t label = 0;
        if (!(in >> label)) throw Error(Errc::io, "semiparam file: missing row " + std::to_string(i + 1));
        if (label < 1 || label > k) throw Error(Errc::configuration, "semiparam file: label out of range on row " + std::to_string(i + 1));
        labels[i] = label - 1;
        for (std::size_t r = 0; r < k; ++r) {
            if (!(in >> values[i * k + r])) throw Error(Errc::io, "semiparam file: short row " + std::to_string(i + 1));
        }
    }
    return {SemiparamData(k, std::move(labels), std::move(values)), anchor - 1};
}

SemiparamInstance read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open " + path);
    return read_instance(in);
}

void write_instance(std::ostream& out, const SemiparamData& data, std::size_t anchor) {
    std::ostringstream buf;
    buf.precision(17);
    buf << data.n() << ' ' << data.k() << ' ' << anchor + 1 << '\n';
    for (std::size_t i = 0; i < data.n(); ++i) {
        buf << data.labels()[i] + 1;
        for (double v : data.row(i)) buf << ' ' << v;
        buf << '\n';
    }
    out << buf.str();
}

} // namespace ipwmc::semiparam
