#include "ipwmc/problems.hpp"

#include "ipwmc/error.hpp"

#include <cmath>

namespace ipwmc::evidence {

namespace {

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

Proposal uniform_proposal() {
    return {[](RandomStream& s) { return uniform01(s); },
            [](double x) { return x >= 0.0 && x <= 1.0 ? 1.0 : 0.0; }};
}

RealFn uniform_density() {
    return [](double x) { return x >= 0.0 && x <= 1.0 ? 1.0 : 0.0; };
}

std::vector<NamedProblem> make_problems() {
    std::vector<NamedProblem> out;

    out.push_back({"linear-uniform", "l(x) = x, f = U(0,1)",
                   {[](double x) { return x; }, uniform_density(), true, uniform_proposal(), Interval{0.0, 1.0}},
                   0.5,
                   [](RandomStream& s) { return uniform01(s); },
                   SurvivalFunction{[](double lam) { return lam < 0.0 ? 1.0 : clamp01(1.0 - lam); }, 1.0}});

    out.push_back({"quadratic-uniform", "l(x) = x^2, f = U(0,1)",
                   {[](double x) { return x * x; }, uniform_density(), true, uniform_proposal(), Interval{0.0, 1.0}},
                   1.0 / 3.0,
                   [](RandomStream& s) { return uniform01(s); },
                   SurvivalFunction{[](double lam) { return lam < 0.0 ? 1.0 : clamp01(1.0 - std::sqrt(lam)); },
                                    1.0}});

    // f_tilde(x) = x; the normalized density is 2x.
    out.push_back({"triangular-unnormalized", "l(x) = x, f_tilde(x) = x on [0,1] (f = 2x)",
                   {[](double x) { return x; }, [](double x) { return x >= 0.0 && x <= 1.0 ? x : 0.0; }, false,
                    uniform_proposal(), Interval{0.0, 1.0}},
                   2.0 / 3.0,
                   [](RandomStream& s) { return std::sqrt(uniform01(s)); },
                   SurvivalFunction{[](double lam) { return lam < 0.0 ? 1.0 : clamp01(1.0 - lam * lam); }, 1.0}});

    out.push_back({"exp-uniform", "l(x) = exp(x), f = U(0,1)",
                   {[](double x) { return std::exp(x); }, uniform_density(), true, uniform_proposal(),
                    Interval{0.0, 1.0}},
                   std::exp(1.0) - 1.0,
                   [](RandomStream& s) { return uniform01(s); },
                   SurvivalFunction{[](double lam) { return lam < 1.0 ? 1.0 : clamp01(1.0 - std::log(lam)); },
                                    std::exp(1.0)}});

    // f(x) = 1/2 + x, sampled by inverting F(x) = (x + x^2) / 2.
    out.push_back({"cos-linear-density", "l(x) = cos(x), f(x) = 1/2 + x on [0,1]",
                   {[](double x) { return std::cos(x); },
                    [](double x) { return x >= 0.0 && x <= 1.0 ? 0.5 + x : 0.0; }, true, uniform_proposal(),
                    Interval{0.0, 1.0}},
                   1.5 * std::sin(1.0) + std::cos(1.0) - 1.0,
                   [](RandomStream& s) { return -0.5 + std::sqrt(0.25 + 2.0 * uniform01(s)); },
                   std::nullopt});
    return out;
}

} // namespace

const std::vector<NamedProblem>& builtin_problems() {
    static const std::vector<NamedProblem> problems = make_problems();
    return problems;
}

const NamedProblem& find_problem(std::string_view name) {
    for (const auto& p : builtin_problems()) {
        if (p.name == name) return p;
    }
    throw Error(Errc::configuration, "unknown test problem '" + std::string(name) + "'");
}

} // namespace ipwmc::evidence
