#include "ipwmc/error.hpp"
#include "ipwmc/harness.hpp"
#include "ipwmc/summary.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace ipwmc::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

} // namespace

double evaluate_estimator(EstimatorId id, const wasserman::Draws& draws, const wasserman::Population& pop,
                          const wasserman::Config& cfg, double tt_lambda) {
    using namespace wasserman;
    try {
        switch (id) {
        case EstimatorId::ht: return ht_wasserman(draws, pop);
        case EstimatorId::hajek: return hajek_wasserman(draws, pop);
        case EstimatorId::bayes: return bayes_li(draws, cfg.alpha_f);
        case EstimatorId::bs_ht: return bs_ht(draws, pop, bin_partition(draws, pop, cfg.k_bins, cfg.delta));
        case EstimatorId::bs_hajek: return bs_hajek(draws, pop, bin_partition(draws, pop, cfg.k_bins, cfg.delta));
        case EstimatorId::tt: return trotter_tukey(to_weighted_sample(draws, pop), tt_lambda).estimate;
        case EstimatorId::an: return adaptive_normalization(to_weighted_sample(draws, pop)).estimate;
        }
    } catch (const Error& e) {
        if (e.code() == Errc::empty_sample || e.code() == Errc::degenerate_mix) return kNaN;
        throw;
    }
    return kNaN;
}

WassermanStudy run_wasserman_study(const BenchConfig& cfg) {
    cfg.validate();
    const auto& wcfg = *cfg.wasserman;
    const std::size_t n_est = cfg.estimators.size();

    WassermanStudy study;
    study.records.resize(cfg.reps * n_est);
    detail::for_each_index(cfg.reps, cfg.workers, [&](std::uint64_t r) {
        RandomStream stream(cfg.seed, r);
        const auto pop = wasserman::generate_population(wcfg, stream);
        const auto draws = wasserman::simulate_draws(pop, wcfg.n, stream);
        const double psi = pop.psi();
        for (std::size_t e = 0; e < n_est; ++e) {
            auto& rec = study.records[r * n_est + e];
            rec.estimator = std::string(estimator_name(cfg.estimators[e]));
            rec.replicate = r;
            rec.estimate = evaluate_estimator(cfg.estimators[e], draws, pop, wcfg, cfg.tt_lambda);
            rec.true_psi = psi;
            rec.sq_error = (rec.estimate - psi) * (rec.estimate - psi);
        }
    });
    study.summary = summarize(study.records);
    return study;
}

std::vector<SummaryRow> summarize(const std::vector<ReplicateRecord>& records) {
    std::vector<std::string> order;
    std::vector<SummaryAccumulator> acc;
    for (const auto& rec : records) {
        auto it = std::find(order.begin(), order.end(), rec.estimator);
        std::size_t idx;
        if (it == order.end()) {
            order.push_back(rec.estimator);
            acc.emplace_back();
            idx = order.size() - 1;
        } else {
            idx = static_cast<std::size_t>(it - order.begin());
        }
        if (std::isfinite(rec.sq_error)) acc[idx].push(rec.sq_error);
    }
    std::vector<SummaryRow> rows;
    for (std::size_t i = 0; i < order.size(); ++i) {
        rows.push_back({order[i], acc[i].count(), acc[i].mean(), acc[i].stddev(), acc[i].std_error()});
    }
    return rows;
}

void write_raw_csv(std::ostream& out, const std::vector<ReplicateRecord>& records) {
    out << "estimator,replicate,estimate,true_psi,sq_error\n";
    for (const auto& r : records) {
        out << r.estimator << ',' << r.replicate << ',' << format_double(r.estimate) << ','
            << format_double(r.true_psi) << ',' << format_double(r.sq_error) << '\n';
    }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << "estimator,reps,mse_mean,mse_sd,mse_se\n";
    for (const auto& r : rows) {
        out << r.estimator << ',' << r.reps << ',' << format_double(r.mse_mean) << ',' << format_double(r.mse_sd)
            << ',' << format_double(r.mse_se) << '\n';
    }
}

ConsistencyCheck run_consistency_check(const BenchConfig& cfg) {
    cfg.validate();
    const auto& wcfg = *cfg.wasserman;
    RandomStream pop_stream(cfg.seed, kPopulationStream);
    const auto pop = wasserman::generate_population(wcfg, pop_stream);
    const double psi = pop.psi();

    ConsistencyCheck check;
    check.psi = psi;
    const std::uint64_t sweep[] = {100, 1000, 10000};
    for (std::uint64_t j = 0; j < 3; ++j) {
        const std::uint64_t n = sweep[j];
        std::vector<double> bayes(cfg.reps), ht(cfg.reps);
        detail::for_each_index(cfg.reps, cfg.workers, [&](std::uint64_t r) {
            RandomStream stream(cfg.seed, (j << 32) | r);
            const auto draws = wasserman::simulate_draws(pop, n, stream);
            bayes[r] = wasserman::bayes_li(draws, wcfg.alpha_f);
            ht[r] = wasserman::ht_wasserman(draws, pop);
        });

        SummaryAccumulator acc_bayes, acc_ht;
        std::uint64_t exceed = 0;
        for (std::uint64_t r = 0; r < cfg.reps; ++r) {
            acc_bayes.push(bayes[r]);
            acc_ht.push(ht[r]);
            if (bayes[r] >= psi + cfg.eps) ++exceed;
        }
        const auto moments = wasserman::delta_moments(pop, n);
        ConsistencyRow row;
        row.n = n;
        row.bias_bayes = acc_bayes.mean() - psi;
        row.var_bayes = acc_bayes.variance();
        row.v_bayes_pred = moments.v_bayes;
        row.var_ht = acc_ht.variance();
        row.v_ht_pred = moments.v_ht;
        row.ht_bound = 1.0 / (static_cast<double>(n) * wcfg.delta * wcfg.delta);
        row.li_exceed = static_cast<double>(exceed) / static_cast<double>(cfg.reps);
        row.li_tail_bound = wasserman::hoeffding_tail_bound(n, wcfg.delta, psi, cfg.eps);
        check.rows.push_back(row);
    }
    return check;
}

void write_consistency_csv(std::ostream& out, const ConsistencyCheck& check) {
    out << "n,psi,bias_bayes,var_bayes,v_bayes_pred,var_ht,v_ht_pred,ht_bound,li_exceed,li_tail_bound\n";
    for (const auto& r : check.rows) {
        out << r.n << ',' << format_double(check.psi) << ',' << format_double(r.bias_bayes) << ','
            << format_double(r.var_bayes) << ',' << format_double(r.v_bayes_pred) << ',' << format_double(r.var_ht)
            << ',' << format_double(r.v_ht_pred) << ',' << format_double(r.ht_bound) << ','
            << format_double(r.li_exceed) << ',' << format_double(r.li_tail_bound) << '\n';
    }
}

} // namespace ipwmc::harness
