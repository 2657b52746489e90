#pragma once
// Named one-dimensional test integrals on [0, 1] with known values.

#include "ipwmc/evidence.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ipwmc::evidence {

struct NamedProblem {
    std::string name;
    std::string description;
    IntegrandProblem problem;
    double exact = 0.0;                             // E_f[l(X)] with f normalized
    std::function<double(RandomStream&)> sample_f;  // draws from the normalized f
    std::optional<SurvivalFunction> survival;       // Z(lambda) = P(lambda < l(X)), X ~ f
};

// linear-uniform, quadratic-uniform, triangular-unnormalized, exp-uniform, cos-linear-density
const std::vector<NamedProblem>& builtin_problems();

// Throws Error(Errc::configuration) for an unknown name.
const NamedProblem& find_problem(std::string_view name);

} // namespace ipwmc::evidence
