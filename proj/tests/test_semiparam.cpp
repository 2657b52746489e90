#include "catch_amalgamated.hpp"

#include "gen.hpp"
#include "ipwmc/error.hpp"
#include "ipwmc/harness.hpp"
#include "ipwmc/semiparam.hpp"

#include <cmath>
#include <sstream>
#include <vector>

using namespace ipwmc;
using namespace ipwmc::semiparam;

namespace {

SemiparamData hand_instance() {
    return SemiparamData(2, {0, 0, 0, 1, 1, 1}, {1.0, 0.5, 0.8, 0.9, 0.3, 1.2, 0.6, 0.2, 0.9, 1.5, 0.4, 0.7});
}

// With psi_1 = 1 the k = 2 score equation is a scalar equation in rho = psi_2:
//   rho = sum_i l_2(x_i) / (n_1 l_1(x_i) + n_2 l_2(x_i) / rho).
// Solved by bisection on log rho.
double hand_oracle(const SemiparamData& d) {
    const double n1 = static_cast<double>(d.counts()[0]);
    const double n2 = static_cast<double>(d.counts()[1]);
    auto excess = [&](double rho) {
        double h = 0.0;
        for (std::size_t i = 0; i < d.n(); ++i) h += d.l(i, 1) / (n1 * d.l(i, 0) + n2 * d.l(i, 1) / rho);
        return rho - h;
    };
    double lo = std::log(1e-6), hi = std::log(1e6);
    REQUIRE(excess(std::exp(lo)) < 0.0);
    REQUIRE(excess(std::exp(hi)) > 0.0);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(std::exp(mid)) > 0.0 ? hi : lo) = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

SemiparamData random_instance(RandomStream& s) {
    const auto k = gen::size_in(s, 2, 4);
    std::vector<std::size_t> labels;
    std::vector<double> values;
    for (std::size_t r = 0; r < k; ++r) {
        const auto nr = gen::size_in(s, 3, 20);
        for (std::size_t i = 0; i < nr; ++i) {
            labels.push_back(r);
            const auto row = gen::reals(s, k, 0.05, 3.0);
            values.insert(values.end(), row.begin(), row.end());
        }
    }
    return SemiparamData(k, std::move(labels), std::move(values));
}

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return Errc::io;
}

} // namespace

TEST_CASE("a single sampler is pinned at one", "[semiparam]") {
    const SemiparamData d(1, {0, 0, 0}, {0.5, 2.0, 1.0});
    const auto sol = ips_solve(d);
    CHECK(sol.psi_hat == std::vector<double>{1.0});
    CHECK(sol.iterations == 1);
    CHECK(sol.converged);
}

TEST_CASE("identical samplers with equal counts have ratio one", "[semiparam]") {
    const SemiparamData d(2, {0, 0, 1, 1}, {0.5, 0.5, 2.0, 2.0, 1.0, 1.0, 3.0, 3.0});
    const auto sol = ips_solve(d);
    CHECK(ratio_estimate(sol, 1, 0) == Catch::Approx(1.0).epsilon(1e-13));
    CHECK(ratio_estimate(sol, 0, 0) == 1.0);
}

TEST_CASE("hand instance agrees with the scalar oracle", "[semiparam]") {
    const auto d = hand_instance();
    const auto sol = ips_solve(d);
    REQUIRE(sol.converged);
    CHECK(sol.psi_hat[0] == 1.0);
    CHECK(std::abs(sol.psi_hat[1] - hand_oracle(d)) < 1e-8);

    SolveOptions other;
    other.initial = std::vector<double>{1.0, 40.0};
    CHECK(std::abs(ips_solve(d, other).psi_hat[1] - hand_oracle(d)) < 1e-10);
}

TEST_CASE("fixed point scaling totals", "[semiparam][property]") {
    RandomStream s(gen::kSeed, 40);
    for (int trial = 0; trial < 100; ++trial) {
        const auto d = random_instance(s);
        const auto sol = ips_solve(d);
        REQUIRE(sol.converged);
        const auto t = scaling_totals(d, sol);
        for (std::size_t r = 0; r < d.k(); ++r) {
            REQUIRE(std::abs(t.sampler_totals[r] - static_cast<double>(d.counts()[r])) < 1e-8);
        }
        for (double c : t.draw_totals) REQUIRE(std::abs(c - 1.0) < 1e-8);
    }
}

TEST_CASE("ratios do not depend on the anchor or the starting point", "[semiparam][property]") {
    RandomStream s(gen::kSeed, 41);
    for (int trial = 0; trial < 100; ++trial) {
        const auto d = random_instance(s);
        const auto base = ips_solve(d);

        SolveOptions swapped;
        swapped.anchor = d.k() - 1;
        swapped.initial = gen::reals(s, d.k(), 0.01, 100.0);
        const auto alt = ips_solve(d, swapped);
        REQUIRE(alt.psi_hat[swapped.anchor] == 1.0);
        for (std::size_t r = 0; r < d.k(); ++r) {
            for (std::size_t q = 0; q < d.k(); ++q) {
                REQUIRE(gen::rel_diff(ratio_estimate(base, r, q), ratio_estimate(alt, r, q)) < 1e-10);
            }
        }
    }
}

TEST_CASE("residuals shrink near convergence", "[semiparam]") {
    RandomStream s(gen::kSeed, 42);
    for (int trial = 0; trial < 20; ++trial) {
        const auto sol = ips_solve(random_instance(s));
        const auto& h = sol.residual_history;
        REQUIRE(h.size() == sol.iterations);
        const std::size_t from = h.size() > 10 ? h.size() - 10 : 1;
        for (std::size_t i = from; i < h.size(); ++i) REQUIRE(h[i] <= h[i - 1] * (1.0 + 1e-9) + 1e-15);
    }
}

TEST_CASE("built-in power instances recover the true ratios", "[semiparam]") {
    for (const auto& inst : harness::semiparam_instances(20240101)) {
        if (inst.true_psi.empty()) continue;
        INFO(inst.name);
        const auto sol = ips_solve(inst.data);
        for (std::size_t r = 0; r < inst.data.k(); ++r) {
            CHECK(std::abs(ratio_estimate(sol, r, inst.anchor) - inst.true_psi[r]) < 0.1 * inst.true_psi[r]);
        }
    }
}

TEST_CASE("data validation", "[semiparam]") {
    CHECK(code_of([] { SemiparamData(2, {0, 0}, {1.0, 1.0, 1.0, 1.0}); }) == Errc::domain);
    CHECK(code_of([] { SemiparamData(2, {0, 2}, {1.0, 1.0, 1.0, 1.0}); }) == Errc::domain);
    CHECK(code_of([] { SemiparamData(2, {0, 1}, {1.0, 1.0, 1.0}); }) == Errc::domain);
    CHECK(code_of([] { SemiparamData(2, {0, 1}, {1.0, -1.0, 1.0, 1.0}); }) == Errc::domain);
    CHECK(code_of([] { SemiparamData(2, {0, 1}, {1.0, 1.0, 0.0, 0.0}); }) == Errc::support_violation);
    CHECK(code_of([] { ips_solve(hand_instance(), SolveOptions{.anchor = 2}); }) == Errc::domain);
}

TEST_CASE("instance files", "[semiparam]") {
    std::stringstream buf;
    write_instance(buf, hand_instance(), 1);
    const auto back = read_instance(buf);
    CHECK(back.anchor == 1);
    CHECK(back.data.k() == 2);
    CHECK(back.data.n() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(back.data.labels()[i] == hand_instance().labels()[i]);
        for (std::size_t r = 0; r < 2; ++r) CHECK(back.data.l(i, r) == hand_instance().l(i, r));
    }

    std::istringstream one_based("2 2 1\n1 0.5 1.0\n2 1.0 0.5\n");
    const auto small = read_instance(one_based);
    CHECK(small.anchor == 0);
    CHECK(small.data.labels()[1] == 1);

    std::istringstream bad_header("two 2 1\n");
    CHECK(code_of([&] { read_instance(bad_header); }) == Errc::io);
    std::istringstream bad_anchor("1 2 3\n1 1 1\n");
    CHECK(code_of([&] { read_instance(bad_anchor); }) == Errc::configuration);
    std::istringstream bad_label("1 2 1\n3 1 1\n");
    CHECK(code_of([&] { read_instance(bad_label); }) == Errc::configuration);
    std::istringstream short_row("2 2 1\n1 1 1\n2 1\n");
    CHECK(code_of([&] { read_instance(short_row); }) == Errc::io);
    CHECK(code_of([] { read_instance_file("/nonexistent/instance.txt"); }) == Errc::io);
}
