#include "ipwmc/error.hpp"
#include "ipwmc/harness.hpp"
#include "ipwmc/ipw.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

namespace ipwmc::harness {

namespace {

constexpr std::size_t kHerd = 50;

// Frame over the whole herd in which only `drawn` responded.
WeightedSample herd_sample(const BasuReport& rep, std::size_t drawn) {
    WeightedSample s;
    s.y = rep.weights;
    s.p.assign(kHerd, rep.other_p);
    s.p[rep.sambo] = rep.sambo_p;
    s.r.assign(kHerd, 0);
    s.r[drawn] = 1;
    s.a = rep.auxiliaries;
    return s;
}

} // namespace

BasuReport run_basu_demo() {
    BasuReport rep;
    rep.sambo = 0;
    rep.jumbo = kHerd - 1;
    rep.sambo_p = 99.0 / 100.0;
    rep.other_p = 1.0 / 4900.0;
    rep.weights.resize(kHerd);
    rep.weights[rep.sambo] = 4000.0; // the representative elephant
    for (std::size_t k = 1; k + 1 < kHerd; ++k) rep.weights[k] = 3200.0 + 30.0 * static_cast<double>(k);
    rep.weights[rep.jumbo] = 6200.0;
    // Last year's weights: known, and proportional to this year's.
    rep.auxiliaries.resize(kHerd);
    for (std::size_t k = 0; k < kHerd; ++k) rep.auxiliaries[k] = rep.weights[k] / 1.1;
    rep.true_total = std::accumulate(rep.weights.begin(), rep.weights.end(), 0.0);

    const auto sambo = herd_sample(rep, rep.sambo);
    const auto jumbo = herd_sample(rep, rep.jumbo);
    rep.sambo_ht_total = horvitz_thompson(sambo, Estimand::total).estimate;
    rep.jumbo_ht_total = horvitz_thompson(jumbo, Estimand::total).estimate;
    rep.sambo_ratio_total = hajek_ratio_total(sambo);
    rep.jumbo_ratio_total = hajek_ratio_total(jumbo);
    return rep;
}

std::string BasuReport::text() const {
    std::ostringstream out;
    out << "Basu's circus: " << weights.size() << " elephants, true total weight " << format_double(true_total)
        << "\n";
    out << "  selection probabilities: Sambo " << format_double(sambo_p) << ", every other elephant "
        << format_double(other_p) << "\n";
    out << "  Sambo drawn (weight " << format_double(weights[sambo]) << "):\n";
    out << "    HT total          " << format_double(sambo_ht_total) << "  (= weight x 100/99)\n";
    out << "    Hajek ratio total " << format_double(sambo_ratio_total) << "\n";
    out << "  Jumbo drawn (weight " << format_double(weights[jumbo]) << "):\n";
    out << "    HT total          " << format_double(jumbo_ht_total) << "  (= weight x 4900)\n";
    out << "    Hajek ratio total " << format_double(jumbo_ratio_total) << "\n";
    return out.str();
}

std::vector<NamedInstance> semiparam_instances(std::uint64_t seed) {
    std::vector<NamedInstance> out;

    {
        std::vector<std::size_t> labels{0, 0, 0, 1, 1, 1};
        std::vector<double> values{1.0, 0.5, 0.8, 0.9, 0.3, 1.2, 0.6, 0.2, 0.9, 1.5, 0.4, 0.7};
        out.push_back({"hand-k2", semiparam::SemiparamData(2, std::move(labels), std::move(values)), 0, {}});
    }

    // l_r(x) = x^{a_r} on [0,1]; psi_r = 1 / (a_r + 1) and draws for sampler r
    // come from density (a_r + 1) x^{a_r}, i.e. U^{1/(a_r + 1)}.
    auto power_instance = [seed](std::string name, std::uint64_t stream_id, std::vector<double> powers,
                                 std::vector<std::size_t> counts) {
        RandomStream stream(seed, stream_id);
        const std::size_t k = powers.size();
        std::vector<std::size_t> labels;
        std::vector<double> values;
        for (std::size_t r = 0; r < k; ++r) {
            for (std::size_t i = 0; i < counts[r]; ++i) {
                double x = std::pow(uniform01(stream), 1.0 / (powers[r] + 1.0));
                if (x == 0.0) x = 0x1.0p-53;
                labels.push_back(r);
                for (double a : powers) values.push_back(std::pow(x, a));
            }
        }
        std::vector<double> truth(k);
        for (std::size_t r = 0; r < k; ++r) truth[r] = (powers[0] + 1.0) / (powers[r] + 1.0);
        return NamedInstance{std::move(name), semiparam::SemiparamData(k, std::move(labels), std::move(values)), 0,
                             std::move(truth)};
    };
    out.push_back(power_instance("power-k2", 1, {0.0, 2.0}, {200, 200}));
    out.push_back(power_instance("power-k3", 2, {0.0, 1.0, 3.0}, {150, 100, 250}));
    return out;
}

void write_semiparam_csv(std::ostream& out, const semiparam::SemiparamData& data, const semiparam::MleSolution& sol) {
    const auto totals = semiparam::scaling_totals(data, sol);
    out << "sampler,count,psi_hat,ratio_to_anchor,row_total\n";
    for (std::size_t r = 0; r < data.k(); ++r) {
        out << r + 1 << ',' << data.counts()[r] << ',' << format_double(sol.psi_hat[r]) << ','
            << format_double(semiparam::ratio_estimate(sol, r, sol.anchor)) << ','
            << format_double(totals.sampler_totals[r]) << '\n';
    }
}

} // namespace ipwmc::harness
