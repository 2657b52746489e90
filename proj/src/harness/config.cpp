#include "ipwmc/error.hpp"
#include "ipwmc/harness.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <string>

namespace ipwmc::harness {

namespace {

constexpr std::array<std::pair<EstimatorId, std::string_view>, 7> kEstimatorNames{{
    {EstimatorId::ht, "ht"},
    {EstimatorId::hajek, "hajek"},
    {EstimatorId::bayes, "bayes"},
    {EstimatorId::bs_ht, "bs_ht"},
    {EstimatorId::bs_hajek, "bs_hajek"},
    {EstimatorId::tt, "tt"},
    {EstimatorId::an, "an"},
}};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

std::string_view estimator_name(EstimatorId id) noexcept {
    for (const auto& [e, name] : kEstimatorNames) {
        if (e == id) return name;
    }
    return "unknown";
}

std::vector<EstimatorId> parse_estimators(std::string_view list) {
    std::vector<EstimatorId> out;
    while (!list.empty()) {
        const auto comma = list.find(',');
        const auto token = trim(list.substr(0, comma));
        list = comma == std::string_view::npos ? std::string_view{} : list.substr(comma + 1);
        if (token.empty()) continue;
        bool found = false;
        for (const auto& [e, name] : kEstimatorNames) {
            if (name == token) {
                if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
                found = true;
                break;
            }
        }
        if (!found) throw Error(Errc::configuration, "unknown estimator '" + std::string(token) + "'");
    }
    if (out.empty()) throw Error(Errc::configuration, "estimator list is empty");
    return out;
}

void BenchConfig::validate() const {
    if (reps == 0) throw Error(Errc::configuration, "reps must be at least 1");
    if (workers == 0) throw Error(Errc::configuration, "workers must be at least 1");
    const bool needs_wasserman = experiment == Experiment::wasserman || experiment == Experiment::consistency;
    if (needs_wasserman) {
        if (!wasserman) throw Error(Errc::configuration, "this experiment needs a wasserman configuration");
        wasserman->validate();
    }
    if (experiment == Experiment::wasserman && estimators.empty()) {
        throw Error(Errc::configuration, "no estimators selected");
    }
    if (experiment == Experiment::consistency && !(eps > 0.0)) {
        throw Error(Errc::configuration, "eps must be positive");
    }
}

std::map<std::string, std::string> read_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open config file " + path);
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view v = line;
        if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
        v = trim(v);
        if (v.empty()) continue;
        const auto eq = v.find('=');
        if (eq == std::string_view::npos) {
            throw Error(Errc::configuration, path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        const auto key = trim(v.substr(0, eq));
        const auto value = trim(v.substr(eq + 1));
        if (key.empty()) throw Error(Errc::configuration, path + ":" + std::to_string(lineno) + ": empty key");
        out[std::string(key)] = std::string(value);
    }
    return out;
}

std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

} // namespace ipwmc::harness
