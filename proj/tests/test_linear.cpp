#include <doctest.h>

#include <cmath>
#include <random>

#include "cfts/calculus.hpp"
#include "cfts/cf_operators.hpp"
#include "cfts/errors.hpp"
#include "cfts/linear.hpp"
#include "reference_oracles.hpp"

using namespace cfts;

namespace {

std::vector<double> ones(std::size_t n) { return std::vector<double>(n, 1.0); }

}  // namespace

TEST_CASE("K and p") {
    CHECK(k_alpha(0.2, 0.5) == doctest::Approx(0.9));
    CHECK(p_alpha(0.2, 0.5) == doctest::Approx(1.0 / 9));
    CHECK(p_alpha(4.2, 0.5) == doctest::Approx(-21.0 / 11));
}

TEST_CASE("problem invariants") {
    const auto z = TimeScale::uniform(0, 1, 31);
    CHECK_THROWS_AS(LinearCFProblem(z, 2, Signal::constant(1), 0, CFOrder(0.5)), NotRegressive);
    CHECK_THROWS_AS(LinearCFProblem(z, -5.0 / 3, Signal::constant(1), 0, CFOrder(0.8)), NotRegressive);
    CHECK_THROWS_AS(LinearCFProblem(TimeScale::uniform(1, 1, 5), 0.2, Signal::constant(1), 0, CFOrder(0.5)), DomainError);
    CHECK_THROWS_AS(LinearCFProblem(z, 0.2, Signal::constant(1), 0, CFOrder(0.5, 2)), DomainError);
    const LinearCFProblem ok(z, 0.2, Signal::constant(1), 0, CFOrder(0.5));
    CHECK(ok.k_alpha() == doctest::Approx(0.9));
}

TEST_CASE("closed form on Z at t = 1") {
    const LinearCFProblem prob(TimeScale::uniform(0, 1, 31), 0.2, Signal::constant(1), 0, CFOrder(0.5));
    CHECK(solve_linear(prob, 1) == doctest::Approx(50.0 / 81).epsilon(1e-14));
    CHECK(oracle::oracle_linear_discrete(0.2, 0.5, 1, ones(2), 0, 1) == doctest::Approx(50.0 / 81).epsilon(1e-14));
}

TEST_CASE("initial condition is exact") {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> l(-3, 3), a(0, 0.99), x(-10, 10);
    const TimeScale ts({UniformGrid{-1, 0.5, 3}, ContinuousInterval{0, 1}, IsolatedPoint{2}});
    for (int i = 0; i < 50; ++i) {
        const double x0 = x(rng);
        try {
            const LinearCFProblem prob(ts, l(rng), Signal::constant(1), x0, CFOrder(a(rng)));
            CHECK(solve_linear(prob, 0) == x0);
        } catch (const NotRegressive&) {
        }
    }
}

TEST_CASE("lambda = 0") {
    const TimeScale ts({UniformGrid{0, 0.5, 3}, ContinuousInterval{1, 2}, IsolatedPoint{3}});
    const LinearCFProblem still(ts, 0, Signal::constant(0), 2.5, CFOrder(0.4));
    for (double t : {0.0, 0.5, 1.5, 3.0}) CHECK(solve_linear(still, t) == 2.5);

    const Signal u = Signal::closure([](double t) { return std::cos(t) + t; });
    const double alpha = 0.3;
    const LinearCFProblem prob(ts, 0, u, 1.5, CFOrder(alpha));
    for (double t : {0.5, 1.25, 2.0, 3.0}) {
        const double want = 1.5 + (1 - alpha) * (u(t) - u(0)) + alpha * delta_integral(ts, u, 0, t);
        CHECK(solve_linear(prob, t) == doctest::Approx(want).epsilon(1e-10));
        CHECK(solve_linear(prob, t) ==
              doctest::Approx(1.5 + cf_integral(ts, u, t, CFOrder(alpha)) - (1 - alpha) * u(0)).epsilon(1e-10));
    }
    std::vector<double> us(8);
    for (int k = 0; k < 8; ++k) us[k] = std::cos(k) + k;
    double sum = 0;
    for (int k = 0; k < 5; ++k) sum += us[k];
    CHECK(oracle::oracle_linear_discrete(0, alpha, 1, us, 1.5, 5) ==
          doctest::Approx(alpha * sum + (1 - alpha) * (us[5] - us[0]) + 1.5));
}

TEST_CASE("shifted transform form agrees with the theorem form") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> l(-3, 3), a(0.01, 0.99), x(-5, 5);
    const auto z = TimeScale::uniform(0, 1, 41);
    const Signal u = Signal::closure([](double t) { return std::sin(t) + 2; });
    int checked = 0;
    while (checked < 40) {
        std::optional<LinearCFProblem> prob;
        try {
            prob.emplace(z, l(rng), u, x(rng), CFOrder(a(rng)));
        } catch (const NotRegressive&) {
            continue;
        }
        if (std::abs(1 + prob->p_alpha()) > 1.3) continue;
        for (int t = 0; t <= 40; t += 5) {
            const double a1 = solve_linear(*prob, t), a2 = solve_linear_shifted(*prob, t);
            CHECK(std::abs(a1 - a2) <= 1e-12 * std::max(1.0, std::abs(a1)));
        }
        ++checked;
    }
}

TEST_CASE("trajectory recurrence matches pointwise evaluation") {
    const TimeScale ts({UniformGrid{0, 0.5, 3}, ContinuousInterval{1, 2}, IsolatedPoint{2.5}, ContinuousInterval{3, 4}});
    const Signal u = Signal::closure([](double t) { return 1 + 0.5 * std::sin(2 * t); });
    const LinearCFProblem prob(ts, -0.7, u, 1.2, CFOrder(0.6));
    const Signal x = solve_linear_trajectory(prob, 4, 0.125);
    for (std::size_t i = 0; i < x.mesh().size(); ++i) {
        CHECK(x.values()[i] == doctest::Approx(solve_linear(prob, x.mesh()[i])).epsilon(1e-9));
    }
}

TEST_CASE("trajectory matches the summation oracle on hZ") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> val(-2, 2);
    const double h = 0.5, lambda = -0.8, alpha = 0.35, x0 = 0.7;
    std::vector<double> us(61);
    for (auto& v : us) v = val(rng);
    const auto ts = TimeScale::uniform(0, h, us.size());
    const auto u = Signal::sampled(ts, ts.mesh(0, ts.max()), us);
    const LinearCFProblem prob(ts, lambda, u, x0, CFOrder(alpha));
    const Signal x = solve_linear_trajectory(prob, ts.max());
    for (std::size_t k = 0; k < us.size(); ++k) {
        const double want = oracle::oracle_linear_discrete(lambda, alpha, h, us, x0, k);
        CHECK(std::abs(x.values()[k] - want) <= 1e-10 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("figure 2 setting stays bounded") {
    const LinearCFProblem prob(TimeScale::uniform(0, 1, 31), 4.2, Signal::constant(1), 0, CFOrder(0.5));
    const Signal x = solve_linear_trajectory(prob, 30);
    double biggest = 0;
    for (double v : x.values()) biggest = std::max(biggest, std::abs(v));
    CHECK(biggest < 1);
    const auto& v = x.values();
    CHECK(std::abs(v[30] - v[29]) < std::abs(v[2] - v[1]));
}

TEST_CASE("near alpha = 1 the trajectory approaches the classical one") {
    const auto z = TimeScale::uniform(0, 1, 31);
    const LinearCFProblem prob(z, 0.2, Signal::constant(1), 0, CFOrder(1 - 1e-6));
    const Signal x = solve_linear_trajectory(prob, 30);
    const Signal c = solve_classical_trajectory(z, 0.2, Signal::constant(1), 0, 30);
    for (int k = 0; k <= 30; ++k) {
        CHECK(std::abs(x.values()[k] - oracle::oracle_classical(0.2, 1, ones(31), 0, k)) < 1e-4 * std::max(1.0, std::abs(c.values()[k])));
        CHECK(c.values()[k] == doctest::Approx(oracle::oracle_classical(0.2, 1, ones(31), 0, k)).epsilon(1e-13));
    }
    CHECK(c.values()[2] == doctest::Approx(2.2));
}

TEST_CASE("classical path") {
    const auto z = TimeScale::uniform(0, 1, 11);
    const Signal c = solve_classical_trajectory(z, 0, Signal::constant(0.5), 3, 10);
    CHECK(c.values()[10] == doctest::Approx(8));
    for (int k = 0; k < 10; ++k) CHECK(std::abs(residual_classical(z, 0, Signal::constant(0.5), c, k)) < 1e-14);
    CHECK_THROWS_AS(solve_classical_trajectory(z, -1, Signal::constant(1), 0, 10), NotRegressive);
    const auto line = TimeScale::interval(0, 1);
    const Signal e = solve_classical_trajectory(line, -1, Signal::constant(0), 1, 1, 1.0 / 1024);
    CHECK(e.values().back() == doctest::Approx(std::exp(-1)).epsilon(1e-12));
}

TEST_CASE("residual of the theorem formula on Z") {
    const LinearCFProblem trivial(TimeScale::uniform(0, 1, 11), 0, Signal::constant(0), 3, CFOrder(0.5));
    const Signal flat = Signal::constant(3);
    for (int t = 0; t <= 10; ++t) CHECK(residual_linear(trivial, flat, t) == 0);

    // with lambda x0 + u(0) != 0 the theorem formula misses the equation by -lambda C,
    // C = (1 - 1/K) x0 - (1 - alpha) u(0) / K
    const double lambda = 0.2, alpha = 0.5;
    const LinearCFProblem prob(TimeScale::uniform(0, 1, 31), lambda, Signal::constant(1), 0, CFOrder(alpha));
    const Signal x = solve_linear_trajectory(prob, 30);
    const double k = prob.k_alpha();
    const double shift = -(1 - alpha) / k;
    for (int t = 1; t <= 30; ++t) CHECK(residual_linear(prob, x, t) == doctest::Approx(-lambda * shift).epsilon(1e-9));
}

TEST_CASE("residual detects a perturbation" * doctest::description("non-degeneracy witness")) {
    const auto z = TimeScale::uniform(0, 1, 11);
    const LinearCFProblem prob(z, 0, Signal::constant(0), 1, CFOrder(0.3));
    std::vector<double> v(11, 1.0);
    v[4] += 1;
    const Signal bumped = Signal::sampled(z, z.mesh(0, 10), v);
    CHECK(residual_linear(prob, bumped, 3) == 0);
    for (int t = 4; t <= 10; ++t) CHECK(std::abs(residual_linear(prob, bumped, t)) > 0);
}

TEST_CASE("residual of the trajectory on Z is below 1e-9" * doctest::may_fail()) {
    const LinearCFProblem prob(TimeScale::uniform(0, 1, 31), 0.2, Signal::constant(1), 0, CFOrder(0.5));
    const Signal x = solve_linear_trajectory(prob, 30);
    for (int t = 0; t <= 30; ++t) CHECK(std::abs(residual_linear(prob, x, t)) < 1e-9);
}

TEST_CASE("continuous closed form matches the trapezoid oracle") {
    const auto line = TimeScale::interval(0, 3);
    const Signal u = Signal::closure([](double t) { return 1 + t * t; });
    const LinearCFProblem prob(line, 0.2, u, 0.5, CFOrder(0.5));
    for (double t : {0.5, 1.5, 3.0}) {
        CHECK(solve_linear(prob, t) ==
              doctest::Approx(oracle::oracle_linear_continuous(0.2, 0.5, [](double s) { return 1 + s * s; }, 0.5, t)).epsilon(1e-6));
    }
}
