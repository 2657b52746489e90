#include "ipwmc/error.hpp"
#include "ipwmc/harness.hpp"
#include "ipwmc/problems.hpp"
#include "ipwmc/summary.hpp"
#include "parallel.hpp"

#include <cmath>
#include <functional>
#include <ostream>

namespace ipwmc::harness {

namespace {

using evidence::NamedProblem;

struct Scheme {
    std::string name;
    // One estimate from n points drawn with the given stream.
    std::function<double(std::uint64_t, RandomStream&)> estimate;
};

std::vector<Scheme> rate_schemes() {
    const NamedProblem* smooth_uniform = &evidence::find_problem("exp-uniform");
    const NamedProblem* smooth_density = &evidence::find_problem("cos-linear-density");

    auto draw = [](const NamedProblem* p, std::uint64_t n, RandomStream& s) {
        std::vector<double> u(n);
        for (auto& x : u) x = p->sample_f(s);
        return u;
    };

    std::vector<Scheme> out;
    // Uniform points with trapezoid weights (weighted Monte Carlo).
    out.push_back({"uniform-trapezoid", [=](std::uint64_t n, RandomStream& s) {
                       return evidence::trapezoid_estimate(draw(smooth_uniform, n, s), smooth_uniform->problem);
                   }});
    // IID points from f with the left Riemann sum of l f.
    out.push_back({"iid-density-riemann", [=](std::uint64_t n, RandomStream& s) {
                       return evidence::riemann_estimate(draw(smooth_density, n, s), smooth_density->problem);
                   }});
    // Uniform points with the left Riemann sum; reported for comparison.
    out.push_back({"uniform-riemann", [=](std::uint64_t n, RandomStream& s) {
                       return evidence::riemann_estimate(draw(smooth_uniform, n, s), smooth_uniform->problem);
                   }});
    // Plain average of l over draws from f.
    out.push_back({"mc-control", [=](std::uint64_t n, RandomStream& s) {
                       const auto u = draw(smooth_density, n, s);
                       double sum = 0.0;
                       for (double x : u) sum += smooth_density->problem.l(x);
                       return sum / static_cast<double>(n);
                   }});
    return out;
}

} // namespace

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw Error(Errc::domain, "ols_slope: need two equal-length series");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw Error(Errc::domain, "ols_slope: constant regressor");
    return sxy / sxx;
}

double RateStudy::slope_of(std::string_view scheme) const {
    for (const auto& s : slopes) {
        if (s.scheme == scheme) return s.slope;
    }
    throw Error(Errc::domain, "no slope for scheme '" + std::string(scheme) + "'");
}

RateStudy run_riemann_rate_study(const BenchConfig& cfg) {
    if (cfg.reps < 2) throw Error(Errc::configuration, "rate study needs at least 2 replicates");
    if (cfg.workers == 0) throw Error(Errc::configuration, "workers must be at least 1");

    const auto schemes = rate_schemes();
    RateStudy study;
    for (std::uint64_t s = 0; s < schemes.size(); ++s) {
        std::vector<double> log_n, log_var;
        for (std::uint64_t j = 0; j < 8; ++j) {
            const std::uint64_t n = std::uint64_t{32} << j;
            std::vector<double> est(cfg.reps);
            detail::for_each_index(cfg.reps, cfg.workers, [&](std::uint64_t r) {
                RandomStream stream(cfg.seed, (s << 48) | (j << 32) | r);
                est[r] = schemes[s].estimate(n, stream);
            });
            SummaryAccumulator acc;
            acc.push(est);
            study.rows.push_back({schemes[s].name, n, acc.mean(), acc.variance()});
            log_n.push_back(std::log(static_cast<double>(n)));
            log_var.push_back(std::log(acc.variance()));
        }
        study.slopes.push_back({schemes[s].name, ols_slope(log_n, log_var)});
    }
    return study;
}

void write_rate_csv(std::ostream& out, const RateStudy& study) {
    out << "scheme,n,mean,variance\n";
    for (const auto& r : study.rows) {
        out << r.scheme << ',' << r.n << ',' << format_double(r.mean) << ',' << format_double(r.variance) << '\n';
    }
}

void write_slopes_csv(std::ostream& out, const RateStudy& study) {
    out << "scheme,slope\n";
    for (const auto& s : study.slopes) out << s.scheme << ',' << format_double(s.slope) << '\n';
}

} // namespace ipwmc::harness
