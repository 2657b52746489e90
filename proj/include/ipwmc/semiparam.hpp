#pragma once
// Semiparametric maximum likelihood for k normalizing constants.
//
// Sampler r contributes n_r draws from P_r(dx) = l_r(x) F(dx) / psi_r. The
// MLE solves
//     psi_s = sum_i l_s(x_i) / sum_r n_r l_r(x_i) / psi_r,
// and at the solution the array n_r l_r(x_i) F(x_i) / psi_r has row totals
// n_r (summing over draws) and per-draw totals 1, where
// F(x_i) = 1 / sum_r n_r l_r(x_i) / psi_r.
//
// Only ratios psi_r / psi_s are identified; the solver pins psi at an anchor
// sampler to 1 after every sweep. Indices are 0-based in this API and 1-based
// in the text file format.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ipwmc::semiparam {

class SemiparamData {
public:
    // labels[i] in 0..k-1 names the sampler that produced draw i; values is
    // row-major n x k with values[i * k + r] = l_r(x_i) >= 0. Throws
    // Error(Errc::domain) on shape or label errors, on a sampler without draws,
    // and Error(Errc::support_violation) on an all-zero row.
    SemiparamData(std::size_t k, std::vector<std::size_t> labels, std::vector<double> values);

    std::size_t k() const noexcept { return k_; }
    std::size_t n() const noexcept { return labels_.size(); }
    std::span<const std::size_t> labels() const noexcept { return labels_; }
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }
    double l(std::size_t i, std::size_t r) const noexcept { return values_[i * k_ + r]; }
    std::span<const double> row(std::size_t i) const noexcept { return {values_.data() + i * k_, k_}; }

private:
    std::size_t k_;
    std::vector<std::size_t> labels_;
    std::vector<std::uint64_t> counts_;
    std::vector<double> values_;
};

struct MleSolution {
    std::vector<double> psi_hat;   // psi_hat[anchor] == 1
    std::vector<double> f_masses;  // F mass at each draw
    std::size_t anchor = 0;
    std::size_t iterations = 0;
    double residual = 0.0;         // max relative change in the last sweep
    bool converged = false;
    std::vector<double> residual_history;
};

struct SolveOptions {
    std::size_t anchor = 0;
    double tol = 1e-13;
    std::size_t max_iter = 100000;
    std::optional<std::vector<double>> initial; // defaults to all ones
};

// Fixed-point sweeps of the score equations. Non-convergence is reported
// through MleSolution::converged rather than thrown. Throws
// Error(Errc::domain) for a bad anchor, tolerance or initial iterate.
MleSolution ips_solve(const SemiparamData& data, const SolveOptions& opts = {});

// psi_hat[r] / psi_hat[s]
double ratio_estimate(const MleSolution& sol, std::size_t r, std::size_t s);

// Row totals (per sampler, over draws) and per-draw totals of the rescaled
// array n_r l_r(x_i) F(x_i) / psi_r.
struct ScalingTotals {
    std::vector<double> sampler_totals; // should equal n_r
    std::vector<double> draw_totals;    // should equal 1
};

ScalingTotals scaling_totals(const SemiparamData& data, const MleSolution& sol);

// Plain-text instance format:
//   n k anchor
//   label v_1 ... v_k      (n lines; label and anchor are 1-based)
struct SemiparamInstance {
    SemiparamData data;
    std::size_t anchor = 0; // 0-based
};

SemiparamInstance read_instance(std::istream& in);
SemiparamInstance read_instance_file(const std::string& path);
void write_instance(std::ostream& out, const SemiparamData& data, std::size_t anchor);

} // namespace ipwmc::semiparam
