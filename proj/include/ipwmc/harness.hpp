#pragma once
// Experiment drivers behind the command-line tool.
//
// Every study is a pure function of its configuration: replicate r draws from
// RandomStream(seed, r) (or a documented sub-stream of it), results are stored
// by replicate index and aggregated in index order, so outputs do not depend
// on the worker count.

#include "ipwmc/semiparam.hpp"
#include "ipwmc/wasserman.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ipwmc::harness {

enum class Experiment { wasserman, consistency, riemann_rate, basu, nested, semiparam_demo };

enum class EstimatorId { ht, hajek, bayes, bs_ht, bs_hajek, tt, an };

std::string_view estimator_name(EstimatorId id) noexcept;
// Comma-separated names; throws Error(Errc::configuration) on an unknown name or empty list.
std::vector<EstimatorId> parse_estimators(std::string_view list);

struct BenchConfig {
    Experiment experiment = Experiment::wasserman;
    std::uint64_t seed = 20240101;
    std::uint64_t reps = 100;
    unsigned workers = 1;
    std::optional<wasserman::Config> wasserman;
    std::vector<EstimatorId> estimators{EstimatorId::ht, EstimatorId::hajek, EstimatorId::bayes, EstimatorId::bs_ht,
                                        EstimatorId::bs_hajek};
    double tt_lambda = 0.5; // mix used by the tt estimator
    double eps = 0.05;      // tail offset in the consistency check
    std::string output_path;

    // Throws Error(Errc::configuration).
    void validate() const;
};

// key = value lines; '#' starts a comment. Throws Error(Errc::io) when the
// file cannot be read and Error(Errc::configuration) on a malformed line.
std::map<std::string, std::string> read_key_value_file(const std::string& path);

// Shortest round-trip decimal representation.
std::string format_double(double x);

// ---------------------------------------------------------------------------
// Wasserman MSE study

struct ReplicateRecord {
    std::string estimator;
    std::uint64_t replicate = 0;
    double estimate = 0.0;
    double true_psi = 0.0;
    double sq_error = 0.0;
};

struct SummaryRow {
    std::string estimator;
    std::uint64_t reps = 0; // replicates with a finite estimate
    double mse_mean = 0.0;
    double mse_sd = 0.0;    // sd of per-replicate squared errors
    double mse_se = 0.0;    // mse_sd / sqrt(reps)
};

struct WassermanStudy {
    std::vector<ReplicateRecord> records; // replicate-major, estimator order within
    std::vector<SummaryRow> summary;
};

// Evaluates one estimator; NaN when it is undefined on these draws.
double evaluate_estimator(EstimatorId id, const wasserman::Draws& draws, const wasserman::Population& pop,
                          const wasserman::Config& cfg, double tt_lambda);

WassermanStudy run_wasserman_study(const BenchConfig& cfg);
std::vector<SummaryRow> summarize(const std::vector<ReplicateRecord>& records);

void write_raw_csv(std::ostream& out, const std::vector<ReplicateRecord>& records);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

// ---------------------------------------------------------------------------
// Riemann convergence-rate study

struct RateRow {
    std::string scheme;
    std::uint64_t n = 0;
    double mean = 0.0;
    double variance = 0.0;
};

struct RateSlope {
    std::string scheme;
    double slope = 0.0;
};

struct RateStudy {
    std::vector<RateRow> rows;
    std::vector<RateSlope> slopes;

    double slope_of(std::string_view scheme) const;
};

// Schemes: uniform-trapezoid, iid-density-riemann, uniform-riemann, mc-control;
// n = 2^5 .. 2^12 with cfg.reps replicates each.
RateStudy run_riemann_rate_study(const BenchConfig& cfg);

// Ordinary least-squares slope of y on x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

void write_rate_csv(std::ostream& out, const RateStudy& study);
void write_slopes_csv(std::ostream& out, const RateStudy& study);

// ---------------------------------------------------------------------------
// Basu's circus

struct BasuReport {
    std::vector<double> weights;      // herd, index 0 is Sambo
    std::vector<double> auxiliaries;  // proportional to weights
    std::size_t sambo = 0;
    std::size_t jumbo = 0;
    double true_total = 0.0;
    double sambo_ht_total = 0.0;
    double jumbo_ht_total = 0.0;
    double sambo_ratio_total = 0.0;
    double jumbo_ratio_total = 0.0;
    double sambo_p = 0.0;
    double other_p = 0.0;

    std::string text() const;
};

BasuReport run_basu_demo();

// ---------------------------------------------------------------------------
// Consistency sweep over n at a fixed population

struct ConsistencyRow {
    std::uint64_t n = 0;
    double bias_bayes = 0.0;
    double var_bayes = 0.0;
    double v_bayes_pred = 0.0;
    double var_ht = 0.0;
    double v_ht_pred = 0.0;
    double ht_bound = 0.0;      // 1 / (n delta^2)
    double li_exceed = 0.0;     // fraction of replicates with bayes >= psi + eps
    double li_tail_bound = 0.0; // exp(-2 n delta^2 (psi + eps)^2)
};

struct ConsistencyCheck {
    double psi = 0.0;
    std::vector<ConsistencyRow> rows;
};

// Sweeps n in {100, 1000, 10000}. The population is drawn from sub-stream
// kPopulationStream; replicate r at sweep index j uses stream (j << 32) | r.
ConsistencyCheck run_consistency_check(const BenchConfig& cfg);
void write_consistency_csv(std::ostream& out, const ConsistencyCheck& check);

inline constexpr std::uint64_t kPopulationStream = std::uint64_t{1} << 63;

// ---------------------------------------------------------------------------
// Semiparametric demo instances

struct NamedInstance {
    std::string name;
    semiparam::SemiparamData data;
    std::size_t anchor = 0;
    std::vector<double> true_psi; // empty when unknown
};

// hand-k2 (n = 6, fixed values), power-k2 and power-k3 (l_r(x) = x^{a_r} on
// [0,1] with x drawn from the matching Beta(a_r + 1, 1)).
std::vector<NamedInstance> semiparam_instances(std::uint64_t seed);

void write_semiparam_csv(std::ostream& out, const semiparam::SemiparamData& data, const semiparam::MleSolution& sol);

} // namespace ipwmc::harness
