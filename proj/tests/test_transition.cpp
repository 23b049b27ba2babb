#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "bdp/kernel.hpp"
#include "bdp/transition.hpp"

using namespace bdp;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
double rel_diff(double a, double b) {
    return std::fabs(a - b) / std::max(std::fabs(b), 1e-300);
}
} // namespace

TEST_CASE("piecewise dispatch examples") {
    CHECK(rel_diff(log_transition_prob({1, 1, 1.0}, {1.0, 1.0}),
                   std::log(0.25)) < 1e-13);
    CHECK(log_transition_prob({5, 5, 0.0}, {2.0, 0.3}) == 0.0);
    // pure birth
    CHECK(rel_diff(log_transition_prob({1, 2, std::log(2.0)}, {1.0, 0.0}),
                   std::log(0.25)) < 1e-13);
    // pure death
    CHECK(rel_diff(log_transition_prob({2, 1, std::log(2.0)}, {0.0, 1.0}),
                   std::log(0.5)) < 1e-13);
    // gamma = 0 closed form at t = xi
    const double xi = xi_threshold({2.0, 0.5});
    CHECK(rel_diff(log_transition_prob({1, 1, xi}, {2.0, 0.5}),
                   std::log(0.16)) < 1e-13);
    // absorbing zero
    CHECK(log_transition_prob({0, 3, 1.0}, {1.0, 1.0}) == -kInf);
    CHECK(log_transition_prob({0, 0, 1.0}, {1.0, 1.0}) == 0.0);
    // frozen process
    CHECK(log_transition_prob({4, 4, 2.0}, {0.0, 0.0}) == 0.0);
    CHECK(log_transition_prob({4, 5, 2.0}, {0.0, 0.0}) == -kInf);
    // impossible under the axis cases
    CHECK(log_transition_prob({3, 2, 1.0}, {1.0, 0.0}) == -kInf);
    CHECK(log_transition_prob({2, 3, 1.0}, {0.0, 1.0}) == -kInf);
}

TEST_CASE("transition_prob wrapper") {
    CHECK(transition_prob({1, 1, 1.0}, {1.0, 1.0}) ==
          doctest::Approx(0.25).epsilon(1e-13));
    CHECK(transition_prob({3, 3, 0.0}, {1.0, 2.0}) == 1.0);
    CHECK(transition_prob({2, 5, 1.0}, {0.0, 1.0}) == 0.0);
    CHECK_THROWS_AS(transition_prob({-1, 1, 1.0}, {1.0, 1.0}), domain_error);
    CHECK_THROWS_AS(transition_prob({1, 1, -1.0}, {1.0, 1.0}), domain_error);
}

TEST_CASE("extinction probability branches") {
    CHECK(rel_diff(log_extinction_prob(1, 1.0, {1.0, 1.0}), std::log(0.5)) <
          1e-13);
    CHECK(log_extinction_prob(4, 2.0, {3.0, 0.0}) == -kInf);
    CHECK(rel_diff(log_extinction_prob(2, std::log(2.0), {0.0, 1.0}),
                   2.0 * std::log(0.5)) < 1e-13);
    CHECK(log_extinction_prob(0, 1.0, {1.0, 1.0}) == 0.0);
    CHECK(log_extinction_prob(3, 0.0, {1.0, 1.0}) == -kInf);
    // unequal-rates branch
    const Rates r{0.5, 1.5};
    const KernelValues kv = kernel_values(2.0, r);
    CHECK(rel_diff(log_extinction_prob(3, 2.0, r), 3.0 * std::log(kv.alpha)) <
          1e-12);
}

TEST_CASE("mean size") {
    CHECK(mean_size(10, 123.0, {0.7, 0.7}) == 10.0);
    CHECK(rel_diff(mean_size(1, 1.0, {1.0, 0.0}), std::exp(1.0)) < 1e-14);
    // doubling configuration: theta ~ 0.0693 over t = 10
    CHECK(mean_size(10, 10.0, {0.305, 0.236}) == doctest::Approx(20.0).epsilon(0.005));
}

TEST_CASE("normalization over j") {
    const std::vector<Rates> grid = {{1.0, 1.0}, {1.2, 0.7}, {0.4, 0.9}};
    const std::vector<double> times = {0.3, 1.0, 2.0};
    for (std::int64_t i = 1; i <= 5; ++i)
        for (const Rates& rates : grid)
            for (double t : times) {
                long double sum = 0.0L;
                for (std::int64_t j = 0; j <= 500; ++j)
                    sum += (long double)transition_prob({i, j, t}, rates);
                CHECK(std::fabs((double)(sum - 1.0L)) < 1e-10);
            }
}

TEST_CASE("Chapman-Kolmogorov composition") {
    const Rates rates{0.8, 1.1};
    const double t1 = 0.6, t2 = 0.9;
    for (std::int64_t i = 1; i <= 5; ++i)
        for (std::int64_t j = 0; j <= 5; ++j) {
            long double sum = 0.0L;
            for (std::int64_t k = 0; k <= 400; ++k) {
                const double a = transition_prob({i, k, t1}, rates);
                if (a == 0.0) continue;
                sum += (long double)a *
                       (long double)transition_prob({k, j, t2}, rates);
            }
            const double direct = transition_prob({i, j, t1 + t2}, rates);
            CHECK(std::fabs((double)sum - direct) < 1e-8);
        }
}

TEST_CASE("first moment identity") {
    const std::vector<Rates> grid = {{1.0, 1.0}, {1.3, 0.6}, {0.5, 1.0}};
    for (std::int64_t i = 1; i <= 5; ++i)
        for (const Rates& rates : grid) {
            const double t = 1.4;
            long double sum = 0.0L;
            for (std::int64_t j = 0; j <= 500; ++j)
                sum += (long double)j *
                       (long double)transition_prob({i, j, t}, rates);
            CHECK(std::fabs((double)sum - mean_size(i, t, rates)) < 1e-8);
        }
}

TEST_CASE("continuity across the equal-rates switch") {
    for (std::int64_t i : {1, 4, 25})
        for (std::int64_t j : {1, 7, 35})
            for (double lam : {0.4, 1.0, 2.2}) {
                const double t = 1.7;
                const double eq =
                    log_transition_prob({i, j, t}, {lam, lam});
                for (double side : {1.0 + 1e-9, 1.0 - 1e-9}) {
                    const double near = log_transition_prob(
                        {i, j, t}, {lam, lam * side});
                    CHECK(std::fabs(near - eq) < 1e-7 * (1.0 + std::fabs(eq)));
                }
            }
}

TEST_CASE("the t = xi window uses the closed form") {
    const Rates rates{2.0, 0.5};
    const double xi = xi_threshold(rates);
    const double at_xi = log_transition_prob({3, 4, xi}, rates);
    const double expected = log_binomial(6, 2) + 3.0 * std::log(0.5 / 2.5) +
                            4.0 * std::log(2.0 / 2.5);
    CHECK(rel_diff(at_xi, expected) < 1e-14);
    // A nearby generic t agrees to the accuracy of the series path.
    const double near = log_transition_prob({3, 4, xi * (1.0 + 1e-10)}, rates);
    CHECK(std::fabs(near - at_xi) < 1e-7);
}
