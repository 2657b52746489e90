// ipwmc: command-line front end for the experiments in ipwmc::harness.

#include "ipwmc/error.hpp"
#include "ipwmc/evidence.hpp"
#include "ipwmc/harness.hpp"
#include "ipwmc/problems.hpp"
#include "ipwmc/semiparam.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace ipwmc;
using harness::format_double;

namespace {

struct Common {
    std::uint64_t seed = 20240101;
    std::uint64_t reps = 100;
    unsigned workers = 1;
    std::string out;
    std::string config;
};

struct WassermanFlags {
    wasserman::Config cfg;
    std::string estimators = "ht,hajek,bayes,bs_ht,bs_hajek";
    double tt_lambda = 0.5;
    double eps = 0.05;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--seed", c.seed, "master seed")->capture_default_str();
    app->add_option("--reps", c.reps, "replicates")->capture_default_str();
    app->add_option("--workers", c.workers, "worker threads")->capture_default_str();
    app->add_option("--out", c.out, "output directory (CSV to stdout when omitted)");
    app->add_option("--config", c.config, "key = value file; flags override its values");
}

void add_wasserman(CLI::App* app, WassermanFlags& w) {
    app->add_option("--n", w.cfg.n, "draws per replicate")->capture_default_str();
    app->add_option("--B", w.cfg.B, "population size")->capture_default_str();
    app->add_option("--delta", w.cfg.delta, "response probabilities lie in [delta, 1-delta]")->capture_default_str();
    app->add_option("--theta-lo", w.cfg.theta_lo, "lower end of the theta range")->capture_default_str();
    app->add_option("--theta-hi", w.cfg.theta_hi, "upper end of the theta range")->capture_default_str();
    app->add_option("--alpha-f", w.cfg.alpha_f, "prior pseudo-count of the Bayes estimator")->capture_default_str();
    app->add_option("--k-bins", w.cfg.k_bins, "bins for the binning-smoothing estimators")->capture_default_str();
    app->add_option("--estimators", w.estimators, "comma list of ht,hajek,bayes,bs_ht,bs_hajek,tt,an")
        ->capture_default_str();
    app->add_option("--tt-lambda", w.tt_lambda, "mix of the tt estimator")->capture_default_str();
}

harness::BenchConfig bench_config(harness::Experiment e, const Common& c) {
    harness::BenchConfig cfg;
    cfg.experiment = e;
    cfg.seed = c.seed;
    cfg.reps = c.reps;
    cfg.workers = c.workers;
    cfg.output_path = c.out;
    return cfg;
}

// Writes through `body` to <out>/<name>, or to stdout when no directory was given.
void emit(const Common& c, const std::string& name, const std::function<void(std::ostream&)>& body) {
    if (c.out.empty()) {
        body(std::cout);
        return;
    }
    std::error_code ec;
    fs::create_directories(c.out, ec);
    if (ec) throw Error(Errc::io, "cannot create directory " + c.out + ": " + ec.message());
    const auto path = (fs::path(c.out) / name).string();
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(Errc::io, "cannot open " + path + " for writing");
    body(file);
    file.flush();
    if (!file) throw Error(Errc::io, "write failed for " + path);
}

// Returns the value of --config in argv, if any.
std::string find_config(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) return argv[i + 1];
        if (a.rfind("--config=", 0) == 0) return a.substr(9);
    }
    return {};
}

// Config entries become "--key value" arguments placed right after the
// subcommand, so options given on the command line come later and win.
std::vector<std::string> expand_args(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    const auto path = find_config(argc, argv);
    if (path.empty() || argc < 2) return args;
    std::vector<std::string> injected;
    for (const auto& [key, value] : harness::read_key_value_file(path)) {
        if (key == "config") throw Error(Errc::configuration, path + ": config files cannot nest");
        injected.push_back("--" + key);
        injected.push_back(value);
    }
    args.insert(args.begin() + 2, injected.begin(), injected.end());
    return args;
}

void print_summary(const std::vector<harness::SummaryRow>& rows) {
    std::ostringstream s;
    s << std::left << std::setw(10) << "estimator" << std::right << std::setw(8) << "reps" << std::setw(14)
      << "mse x 1e2" << std::setw(14) << "sd x 1e2" << std::setw(14) << "se x 1e2" << '\n';
    s << std::fixed << std::setprecision(5);
    for (const auto& r : rows) {
        s << std::left << std::setw(10) << r.estimator << std::right << std::setw(8) << r.reps << std::setw(14)
          << 100.0 * r.mse_mean << std::setw(14) << 100.0 * r.mse_sd << std::setw(14) << 100.0 * r.mse_se << '\n';
    }
    std::cerr << s.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inverse-probability-weighting and Monte Carlo evidence experiments"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    Common common;
    WassermanFlags wflags;

    auto* sim = app.add_subcommand("simulate-wasserman", "MSE study of the estimators on random populations");
    add_common(sim, common);
    add_wasserman(sim, wflags);

    auto* rate = app.add_subcommand("rate-riemann", "variance decay of Riemann-sum estimators versus n");
    add_common(rate, common);

    auto* basu = app.add_subcommand("demo-basu", "the circus elephant example");
    add_common(basu, common);

    auto* cons = app.add_subcommand("check-consistency", "moments and tail bounds over n at a fixed population");
    add_common(cons, common);
    add_wasserman(cons, wflags);
    cons->add_option("--eps", wflags.eps, "tail offset for the Bayes exceedance count")->capture_default_str();

    std::string problem = "linear-uniform";
    std::size_t m = 500;
    double K = 50.0;
    auto* nested = app.add_subcommand("nested", "nested quadrature on a built-in problem");
    add_common(nested, common);
    nested->add_option("--problem", problem, "built-in problem name")->capture_default_str();
    nested->add_option("--m", m, "number of grid points")->capture_default_str();
    nested->add_option("--K", K, "grid density, a_i = exp(-i/K)")->capture_default_str();

    std::string file, instance;
    std::size_t anchor = 0;
    auto* semi = app.add_subcommand("semiparam", "semiparametric MLE of normalizing-constant ratios");
    add_common(semi, common);
    semi->add_option("--file", file, "instance file")->check(CLI::ExistingFile);
    semi->add_option("--instance", instance, "built-in instance: hand-k2, power-k2, power-k3");
    semi->add_option("--anchor", anchor, "1-based anchor sampler (overrides the instance)");

    try {
        auto args = expand_args(argc, argv);
        std::vector<char*> ptrs;
        for (auto& a : args) ptrs.push_back(a.data());
        app.parse(static_cast<int>(ptrs.size()), ptrs.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "ipwmc: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "ipwmc: %s\n", e.what());
        return 2;
    }

    try {
        if (*sim) {
            auto cfg = bench_config(harness::Experiment::wasserman, common);
            cfg.wasserman = wflags.cfg;
            cfg.estimators = harness::parse_estimators(wflags.estimators);
            cfg.tt_lambda = wflags.tt_lambda;
            const auto study = harness::run_wasserman_study(cfg);
            if (!common.out.empty()) emit(common, "raw.csv", [&](std::ostream& o) { write_raw_csv(o, study.records); });
            emit(common, "summary.csv", [&](std::ostream& o) { write_summary_csv(o, study.summary); });
            print_summary(study.summary);
        } else if (*rate) {
            if (rate->count("--reps") == 0) common.reps = 200;
            auto cfg = bench_config(harness::Experiment::riemann_rate, common);
            cfg.validate();
            const auto study = harness::run_riemann_rate_study(cfg);
            if (!common.out.empty()) emit(common, "rate.csv", [&](std::ostream& o) { write_rate_csv(o, study); });
            emit(common, "slopes.csv", [&](std::ostream& o) { write_slopes_csv(o, study); });
        } else if (*basu) {
            const auto report = harness::run_basu_demo();
            std::cout << report.text();
            if (!common.out.empty()) emit(common, "basu.txt", [&](std::ostream& o) { o << report.text(); });
        } else if (*cons) {
            if (cons->count("--reps") == 0) common.reps = 1000;
            auto cfg = bench_config(harness::Experiment::consistency, common);
            cfg.wasserman = wflags.cfg;
            cfg.eps = wflags.eps;
            const auto check = harness::run_consistency_check(cfg);
            emit(common, "consistency.csv", [&](std::ostream& o) { write_consistency_csv(o, check); });
        } else if (*nested) {
            const auto& p = evidence::find_problem(problem);
            if (!p.survival) throw Error(Errc::configuration, "problem '" + problem + "' has no survival function");
            const double est = evidence::nested_quadrature(*p.survival, m, K);
            emit(common, "nested.csv", [&](std::ostream& o) {
                o << "problem,m,K,estimate,exact,abs_error\n";
                o << problem << ',' << m << ',' << format_double(K) << ',' << format_double(est) << ','
                  << format_double(p.exact) << ',' << format_double(std::abs(est - p.exact)) << '\n';
            });
        } else if (*semi) {
            if (file.empty() == instance.empty()) {
                throw Error(Errc::configuration, "semiparam needs exactly one of --file or --instance");
            }
            std::optional<semiparam::SemiparamData> data;
            std::size_t use_anchor = 0;
            if (!file.empty()) {
                auto inst = semiparam::read_instance_file(file);
                use_anchor = inst.anchor;
                data.emplace(std::move(inst.data));
            } else {
                bool found = false;
                for (auto& ni : harness::semiparam_instances(common.seed)) {
                    if (ni.name == instance) {
                        use_anchor = ni.anchor;
                        data.emplace(std::move(ni.data));
                        found = true;
                        break;
                    }
                }
                if (!found) throw Error(Errc::configuration, "unknown instance '" + instance + "'");
            }
            if (semi->count("--anchor") > 0) {
                if (anchor == 0 || anchor > data->k()) throw Error(Errc::configuration, "--anchor out of range");
                use_anchor = anchor - 1;
            }
            semiparam::SolveOptions opts;
            opts.anchor = use_anchor;
            const auto sol = semiparam::ips_solve(*data, opts);
            if (!sol.converged) std::fprintf(stderr, "ipwmc: warning: solver stopped before convergence\n");
            emit(common, "semiparam.csv", [&](std::ostream& o) { harness::write_semiparam_csv(o, *data, sol); });
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "ipwmc: %s\n", e.what());
        return 1;
    }
    return 0;
}
