#include "catch_amalgamated.hpp"

#include "gen.hpp"
#include "ipwmc/error.hpp"
#include "ipwmc/evidence.hpp"
#include "ipwmc/problems.hpp"
#include "ipwmc/summary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace ipwmc;
using namespace ipwmc::evidence;

namespace {

ISDraws draws_of(std::vector<double> y, std::vector<double> w) { return ISDraws{std::move(y), std::move(w)}; }

IntegrandProblem on_unit(RealFn lf) {
    IntegrandProblem p;
    p.l = std::move(lf);
    p.f = [](double) { return 1.0; };
    p.domain = Interval{0.0, 1.0};
    return p;
}

// Uniform target on [0,1] with proposal density 0.5 + x.
IntegrandProblem tilted(RealFn l) {
    IntegrandProblem p;
    p.l = std::move(l);
    p.f = [](double) { return 1.0; };
    p.g.sample = [](RandomStream& s) { return -0.5 + std::sqrt(0.25 + 2.0 * uniform01(s)); };
    p.g.density = [](double x) { return 0.5 + x; };
    p.domain = Interval{0.0, 1.0};
    return p;
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

TEST_CASE("importance sampling estimate", "[evidence]") {
    const auto d = draws_of({0.25, 0.75}, {1.0, 1.0});
    const auto l = evaluate([](double x) { return x * x; }, d.y);
    CHECK(is_estimate(d, l) == 0.3125);

    const auto c = draws_of({0.1, 0.2, 0.3}, {0.5, 2.0, 1.25});
    const std::vector<double> lc(3, 4.0);
    CHECK(is_estimate(c, lc) == Catch::Approx(4.0 * (3.75 / 3.0)).epsilon(1e-15));

    auto same = tilted([](double x) { return std::sin(x); });
    same.f = same.g.density;
    RandomStream s(1, 1);
    const auto dd = draw_importance(same, 200, s);
    double mean = 0.0;
    for (double y : dd.y) mean += std::sin(y);
    CHECK(is_estimate(same, dd) == Catch::Approx(mean / 200.0).epsilon(1e-14));
}

TEST_CASE("draw_importance rejects proposals missing the target support", "[evidence]") {
    IntegrandProblem p = on_unit([](double x) { return x; });
    p.g.sample = [](RandomStream& s) { return uniform01(s); };
    p.g.density = [](double x) { return x < 0.5 ? 0.0 : 2.0; };
    RandomStream s(2, 2);
    CHECK(code_of([&] { draw_importance(p, 100, s); }) == Errc::domain);
}

TEST_CASE("self-normalized importance sampling", "[evidence]") {
    CHECK(snis_estimate(draws_of({0, 0}, {1.0, 3.0}), std::vector<double>{0.0, 1.0}) == 0.75);
    CHECK(code_of([] { snis_estimate(draws_of({0, 0}, {0.0, 0.0}), std::vector<double>{1.0, 1.0}); }) ==
          Errc::degenerate_weights);
}

TEST_CASE("snis of a constant and under rescaled weights", "[evidence][property]") {
    RandomStream s(gen::kSeed, 30);
    for (int trial = 0; trial < 500; ++trial) {
        const auto n = gen::size_in(s, 1, 50);
        auto d = draws_of(gen::reals(s, n, 0.0, 1.0), gen::reals(s, n, 0.01, 5.0));
        const auto l = gen::reals(s, n, -2.0, 2.0);
        const double c = gen::reals(s, 1, -10.0, 10.0)[0];
        REQUIRE(gen::rel_diff(snis_estimate(d, std::vector<double>(n, c)), c) <= 1e-13);

        const double before = snis_estimate(d, l);
        auto pow2 = d;
        for (auto& w : pow2.w) w *= 0x1p-7;
        REQUIRE(snis_estimate(pow2, l) == before);
        auto scaled = d;
        for (auto& w : scaled.w) w *= 3.7;
        REQUIRE(std::abs(snis_estimate(scaled, l) - before) <= 1e-13 * (1.0 + std::abs(before)));
    }
}

TEST_CASE("regression estimate", "[evidence]") {
    auto brute = [](const std::vector<double>& w, const std::vector<double>& l) {
        const double n = static_cast<double>(w.size());
        double wb = 0.0;
        for (double x : w) wb += x;
        wb /= n;
        double s2 = 0.0;
        for (double x : w) s2 += (x - wb) * (x - wb);
        s2 /= n;
        const double b = (1.0 - wb) / s2;
        double v = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) v += w[i] * (1.0 + b * (w[i] - wb)) * l[i];
        return v / n;
    };
    const std::vector<double> w1{0.5, 1.5}, l1{1.0, 2.0};
    CHECK(regression_estimate(draws_of({0, 0}, w1), l1) == Catch::Approx(brute(w1, l1)).epsilon(1e-14));
    CHECK(regression_estimate(draws_of({0, 0}, w1), l1) == Catch::Approx(1.75).epsilon(1e-14));

    const std::vector<double> w2{0.5, 1.0, 2.0}, l2{1.0, 2.0, 3.0};
    CHECK(regression_estimate(draws_of({0, 0, 0}, w2), l2) == Catch::Approx(brute(w2, l2)).epsilon(1e-14));

    const std::vector<double> ones{1.0, 1.0, 1.0};
    CHECK(regression_estimate(draws_of({0, 0, 0}, ones), l2) == Catch::Approx(2.0).epsilon(1e-15));

    // Weights averaging to one leave the IS estimate unchanged.
    const std::vector<double> w3{0.25, 1.75, 1.0};
    CHECK(regression_estimate(draws_of({0, 0, 0}, w3), l2) ==
          Catch::Approx(is_estimate(draws_of({0, 0, 0}, w3), l2)).epsilon(1e-14));

    CHECK(code_of([] { regression_estimate(draws_of({0}, {1.0}), std::vector<double>{1.0}); }) == Errc::domain);
}

TEST_CASE("difference estimate", "[evidence]") {
    const auto d = draws_of({0, 0, 0}, {0.5, 1.0, 2.0});
    const std::vector<double> l{1.0, 2.0, 3.0};
    CHECK(difference_estimate(d, l, 0.0) == is_estimate(d, l));
    CHECK(difference_estimate(d, l, 2.0) == Catch::Approx(is_estimate(d, l) + 2.0 * (1.0 - 3.5 / 3.0)));
    const auto unit = draws_of({0, 0}, {0.5, 1.5});
    for (double g : {-3.0, 0.1, 7.0}) {
        CHECK(difference_estimate(unit, std::vector<double>{1.0, 2.0}, g) ==
              is_estimate(unit, std::vector<double>{1.0, 2.0}));
    }
    CHECK(optimal_difference_gamma(draws_of({0, 0}, {2.0, 2.0}), std::vector<double>{1.0, 5.0}) == 0.0);
}

TEST_CASE("plug-in difference estimator does not lose to plain IS", "[evidence]") {
    const auto prob = tilted([](double x) { return std::exp(x); });
    const int reps = 1000;
    std::vector<double> is(reps), diff(reps);
    for (int r = 0; r < reps; ++r) {
        RandomStream s(gen::kSeed, 300 + r);
        const auto d = draw_importance(prob, 100, s);
        const auto l = evaluate(prob.l, d.y);
        is[r] = is_estimate(d, l);
        diff[r] = difference_estimate(d, l, optimal_difference_gamma(d, l));
    }
    CHECK(sample_variance(diff) <= 1.05 * sample_variance(is));
}

TEST_CASE("adaptively normalized importance sampling", "[evidence]") {
    const auto d = draws_of({0, 0}, {1.0, 3.0});
    const std::vector<double> l{0.0, 1.0};
    CHECK(an_is_estimate(d, l, 0.5) == 1.0);
    CHECK(an_is_estimate(d, l, 1.0) == is_estimate(d, l));
    CHECK(an_is_estimate(d, l, 0.0) == snis_estimate(d, l));
    // lambda n + (1 - lambda) sum W = 2 lambda + 4 (1 - lambda) vanishes at lambda = 2
    CHECK(code_of([&] { an_is_estimate(d, l, 2.0); }) == Errc::degenerate_mix);
}

TEST_CASE("left Riemann sum", "[evidence]") {
    const auto p = on_unit([](double u) { return u; });
    CHECK(riemann_estimate(std::vector<double>{0.0, 0.5, 1.0}, p) == 0.25);
    CHECK(riemann_estimate(std::vector<double>{0.5}, p) == 0.25);
    CHECK(riemann_estimate(std::vector<double>{1.0, 0.5, 0.0}, p) == 0.25);

    IntegrandProblem c = on_unit([](double) { return 2.5; });
    c.domain = Interval{-1.0, 3.0};
    RandomStream s(3, 3);
    for (int t = 0; t < 20; ++t) {
        const auto pts = gen::reals(s, gen::size_in(s, 1, 30), -1.0, 3.0);
        REQUIRE(riemann_estimate(pts, c) == Catch::Approx(10.0).epsilon(1e-13));
    }

    const auto sq = on_unit([](double u) { return u * u; });
    RandomStream u(4, 4);
    CHECK(std::abs(riemann_estimate(gen::reals(u, 10000, 0.0, 1.0), sq) - 1.0 / 3.0) < 1e-3);

    CHECK(code_of([&] { riemann_estimate(std::vector<double>{1.5}, p); }) == Errc::domain);
    IntegrandProblem open = p;
    open.domain.reset();
    CHECK(code_of([&] { riemann_estimate(std::vector<double>{0.5}, open); }) == Errc::domain);
    IntegrandProblem point = p;
    point.domain = Interval{0.5, 0.5};
    CHECK(code_of([&] { riemann_estimate(std::vector<double>{0.5}, point); }) == Errc::degenerate_grid);
}

TEST_CASE("trapezoid sum", "[evidence]") {
    const auto p = on_unit([](double u) { return u; });
    CHECK(trapezoid_estimate(std::vector<double>{0.3}, p) == Catch::Approx(0.5).epsilon(1e-15));
    const auto sq = on_unit([](double u) { return u * u; });
    // (0.5 (0 + 0.25) + 0.5 (0.25 + 1)) / 2
    CHECK(trapezoid_estimate(std::vector<double>{0.5}, sq) == Catch::Approx(0.375).epsilon(1e-15));
}

TEST_CASE("riemann self-normalized estimate", "[evidence]") {
    RandomStream s(5, 5);
    const auto pts = gen::reals(s, 100, 0.0, 1.0);
    const RealFn tri = [](double u) { return 2.0 * u; };
    CHECK(riemann_snis_estimate(pts, [](double) { return 1.7; }, tri) == Catch::Approx(1.7).epsilon(1e-14));

    const RealFn l = [](double u) { return std::cos(u); };
    const double before = riemann_snis_estimate(pts, l, tri);
    CHECK(riemann_snis_estimate(pts, l, [](double u) { return 0x1p5 * u; }) == before);
    CHECK(riemann_snis_estimate(pts, l, [](double u) { return 3.3 * u; }) == Catch::Approx(before).epsilon(1e-14));

    std::vector<double> grid(20001);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<double>(i) / 20000.0;
    CHECK(riemann_snis_estimate(grid, [](double u) { return u; }, tri) == Catch::Approx(2.0 / 3.0).margin(1e-4));

    CHECK(code_of([] { riemann_snis_estimate(std::vector<double>{0.3, 0.3}, [](double) { return 1.0; },
                                             [](double) { return 1.0; }); }) == Errc::degenerate_grid);
    CHECK(code_of([] { riemann_snis_estimate(std::vector<double>{0.1, 0.3}, [](double) { return 1.0; },
                                             [](double) { return 0.0; }); }) == Errc::degenerate_weights);
}

TEST_CASE("inverse survival function", "[evidence]") {
    const SurvivalFunction linear{[](double lam) { return std::clamp(1.0 - lam, 0.0, 1.0); }, 1.0};
    for (double a : {0.01, 0.2, 0.5, 0.77, 0.99}) CHECK(std::abs(lambda_inverse(linear, a) - (1.0 - a)) < 1e-10);

    const double c = 0.37;
    const SurvivalFunction step{[c](double lam) { return lam < c ? 1.0 : 0.0; }, 1.0};
    for (double a : {0.05, 0.5, 0.95}) CHECK(std::abs(lambda_inverse(step, a) - c) < 1e-10);

    CHECK(code_of([&] { lambda_inverse(linear, 0.0); }) == Errc::domain);
    CHECK(code_of([&] { lambda_inverse(linear, 1.0); }) == Errc::domain);
    const SurvivalFunction rising{[](double lam) { return std::min(1.0, 0.2 + lam); }, 1.0};
    CHECK(code_of([&] { lambda_inverse(rising, 0.5); }) == Errc::invalid_survival);
}

TEST_CASE("inverse survival is non-increasing in a", "[evidence][property]") {
    const auto& quad = find_problem("quadratic-uniform");
    RandomStream s(gen::kSeed, 31);
    auto a = gen::reals(s, 100, 1e-6, 1.0 - 1e-6);
    std::sort(a.begin(), a.end());
    double prev = lambda_inverse(*quad.survival, a[0]);
    for (std::size_t i = 1; i < a.size(); ++i) {
        const double cur = lambda_inverse(*quad.survival, a[i]);
        REQUIRE(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("nested quadrature", "[evidence]") {
    const auto& lin = find_problem("linear-uniform");
    CHECK(std::abs(nested_quadrature(*lin.survival, 500, 50.0) - 0.5) < 0.01);

    double prev_err = 1.0;
    for (std::size_t m : {10, 100, 1000}) {
        const double err = std::abs(nested_quadrature(*lin.survival, m, 50.0) - 0.5);
        CHECK(err <= prev_err);
        prev_err = err;
    }

    const double c = 2.0;
    const SurvivalFunction flat{[c](double lam) { return lam < c ? 1.0 : 0.0; }, 4.0};
    const auto grid = nested_grid(200, 20.0);
    CHECK(nested_quadrature(flat, 200, 20.0) == Catch::Approx(c * (1.0 - grid.back())).epsilon(1e-10));

    CHECK(grid.size() == 201);
    CHECK(grid[0] == 1.0);
    CHECK(grid[20] == Catch::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(code_of([] { nested_grid(0, 1.0); }) == Errc::domain);
}

TEST_CASE("built-in problems carry consistent exact values", "[evidence]") {
    for (const auto& p : builtin_problems()) {
        INFO(p.name);
        // Midpoint rule on l f with f normalized by the same rule.
        const int m = 200000;
        double num = 0.0, den = 0.0;
        for (int i = 0; i < m; ++i) {
            const double x = (i + 0.5) / m;
            num += p.problem.l(x) * p.problem.f(x);
            den += p.problem.f(x);
        }
        CHECK(num / den == Catch::Approx(p.exact).epsilon(1e-8));

        RandomStream s(gen::kSeed, 32);
        SummaryAccumulator acc;
        for (int i = 0; i < 100000; ++i) acc.push(p.problem.l(p.sample_f(s)));
        CHECK(std::abs(acc.mean() - p.exact) < 4.0 * acc.std_error());

        if (p.survival) {
            RandomStream t(gen::kSeed, 33);
            std::vector<double> lv(50000);
            for (auto& v : lv) v = p.problem.l(p.sample_f(t));
            for (double q : {0.1, 0.35, 0.6, 0.85}) {
                const double lam = q * p.survival->lambda_max;
                const double freq =
                    std::count_if(lv.begin(), lv.end(), [lam](double v) { return v > lam; }) / double(lv.size());
                CHECK(std::abs(p.survival->z(lam) - freq) < 0.01);
            }
            CHECK(std::abs(nested_quadrature(*p.survival, 2000, 200.0) - p.exact) < 0.01);
        }
    }
    CHECK(code_of([] { find_problem("no-such-problem"); }) == Errc::configuration);
}

TEST_CASE("importance sampling on a built-in problem is unbiased", "[evidence]") {
    const auto prob = tilted([](double x) { return x * x; });
    SummaryAccumulator acc;
    for (int r = 0; r < 500; ++r) {
        RandomStream s(gen::kSeed, 700 + r);
        acc.push(is_estimate(prob, draw_importance(prob, 200, s)));
    }
    CHECK(std::abs(acc.mean() - 1.0 / 3.0) < 4.0 * acc.std_error());
}
