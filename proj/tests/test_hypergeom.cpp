#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "bdp/hypergeom.hpp"
#include "bdp/oracle.hpp"

using namespace bdp;

namespace {
double rel_diff(double a, double b) {
    return std::fabs(a - b) / std::max(std::fabs(b), 1e-300);
}
} // namespace

TEST_CASE("terminating cases and small exact values") {
    CHECK(hyp2f1_ttrr({7, 0, 1, 5.3}) == 1.0);
    CHECK(hyp2f1_ttrr({0, 7, 1, 5.3}) == 1.0);
    CHECK(hyp2f1_ttrr({4, 9, 1, 0.0}) == 1.0);
    CHECK(rel_diff(hyp2f1_ttrr({3, 1, 1, 2.0}), 3.0) < 1e-14);
    CHECK(rel_diff(hyp2f1_ttrr({2, 2, 1, 1.0}), 8.0 / 3.0) < 1e-14);
    CHECK(rel_diff(hyp2f1_ttrr({1, 3, 1, 2.0}), 3.0) < 1e-14);
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(hyp2f1_ttrr({-1, 2, 1, 0.5}), domain_error);
    CHECK_THROWS_AS(hyp2f1_ttrr({2, 2, 2, 0.5}), domain_error);
    CHECK_THROWS_AS(hyp2f1_ttrr({2, 2, 1, -1.0}), domain_error);
    CHECK_THROWS_AS(hyp2f1_ttrr({2, 2, 1, -1.5}), domain_error);
    CHECK_THROWS_AS(hyp2f1_ttrr({2, 2, 1, std::nan("")}), domain_error);
}

TEST_CASE("log form agrees with the plain form") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> u_ab(0, 40);
    std::uniform_real_distribution<double> u_z(-0.99, 10.0);
    for (int it = 0; it < 300; ++it) {
        const HyperArgs args{u_ab(rng), u_ab(rng), 1 - (std::int64_t)(it % 4),
                             u_z(rng)};
        const double direct = hyp2f1_ttrr(args);
        const SignedLog lg = hyp2f1_ttrr_log(args);
        CHECK(rel_diff((double)lg.sign * std::exp(lg.log_abs), direct) < 1e-13);
    }
}

TEST_CASE("backward step reproduces the forward values") {
    // y_b from y_{b+1}, y_{b+2} at a = 5, k = 1, z = 2
    const double y3 = hyp2f1_ttrr({5, 3, 1, 2.0});
    const double y4 = hyp2f1_ttrr({5, 4, 1, 2.0});
    const double y5 = hyp2f1_ttrr({5, 5, 1, 2.0});
    CHECK(rel_diff(backward_step({5, 3, 1, 2.0}, y4, y5), y3) < 1e-10);

    const double b2 = hyp2f1_ttrr({3, 2, 1, 2.0});
    const double b3 = hyp2f1_ttrr({3, 3, 1, 2.0});
    CHECK(rel_diff(backward_step({3, 1, 1, 2.0}, b2, b3), 3.0) < 1e-10);

    CHECK_THROWS_AS(backward_step({3, 1, 1, 0.0}, 1.0, 1.0), domain_error);
    CHECK_THROWS_AS(backward_step({3, 0, 1, 2.0}, 1.0, 1.0), domain_error);
}

TEST_CASE("recurrence residual") {
    // Exact triple from direct summation at a = 4, k = 1, z = 1.5.
    const HyperArgs at{4, 2, 1, 1.5};
    const double y1 = hyp2f1_reference({4, 1, 1, 1.5});
    const double y2 = hyp2f1_reference({4, 2, 1, 1.5});
    const double y3 = hyp2f1_reference({4, 3, 1, 1.5});
    const double scale = std::max({std::fabs(y1), std::fabs(y2), std::fabs(y3)});
    CHECK(std::fabs(ttrr_residual(at, y1, y2, y3)) < 1e-9 * 64.0 * scale);

    // Linearity in the middle entry.
    const double base = ttrr_residual(at, y1, y2, y3);
    const double bumped = ttrr_residual(at, y1, y2 * (1.0 + 1e-3), y3);
    CHECK(std::fabs(bumped - base) > 1e-4 * scale);

    // Starting values 1 and 1 + a z / (a + 1 - k).
    const double a = 3, z = 2.0;
    const double s1 = 1.0 + a * z / (a + 1.0 - 1.0);
    const double s2 = hyp2f1_ttrr({3, 2, 1, 2.0});
    CHECK(std::fabs(ttrr_residual({3, 1, 1, 2.0}, 1.0, s1, s2)) <
          1e-10 * std::fabs(s2) * 100.0);
}

TEST_CASE("symmetry in (a, b)") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<std::int64_t> u_ab(0, 50);
    std::uniform_real_distribution<double> u_z(-0.99, 10.0);
    const std::int64_t ks[4] = {1, 0, -1, -2};
    for (int it = 0; it < 400; ++it) {
        const std::int64_t a = u_ab(rng);
        const std::int64_t b = u_ab(rng);
        const std::int64_t k = ks[it % 4];
        const double z = u_z(rng);
        const double ab = hyp2f1_ttrr({a, b, k, z});
        const double ba = hyp2f1_ttrr({b, a, k, z});
        CHECK(rel_diff(ab, ba) < 1e-12);
    }
}

TEST_CASE("agreement with the exact rational series (reduced grid)") {
    // The acceptance suite runs the full a, b <= 30 sweep.
    const double zs[6] = {-0.9, -0.5, 0.5, 1.0, 3.0, 10.0};
    const std::int64_t ks[3] = {1, 0, -1};
    for (std::int64_t a = 0; a <= 12; ++a)
        for (std::int64_t b = 0; b <= 12; ++b)
            for (std::int64_t k : ks)
                for (double z : zs) {
                    const HyperArgs args{a, b, k, z};
                    CHECK(rel_diff(hyp2f1_ttrr(args), hyp2f1_reference(args)) <
                          1e-12);
                }
}

TEST_CASE("large-b limit is (1 + z)^a") {
    // The deviation from the limit decays like (a - k) * <h> / b; at
    // a = 3, k = 1, z = 0.5 that is almost exactly 2/b.
    const double limit = std::pow(1.5, 3.0);
    CHECK(rel_diff(hyp2f1_ttrr({3, 10000, 1, 0.5}), limit) < 3.0 / 10000.0);
    CHECK(rel_diff(hyp2f1_ttrr({3, 100000, 1, 0.5}), limit) < 3.0 / 100000.0);
    CHECK(rel_diff(hyp2f1_ttrr({3, 1000000000, 1, 0.5}), limit) < 1e-6);
}

TEST_CASE("log form handles indices far beyond double range") {
    const SignedLog lg = hyp2f1_ttrr_log({20000, 30000, 1, 4.0});
    CHECK(lg.sign == 1);
    CHECK(std::isfinite(lg.log_abs));
    CHECK(lg.log_abs > 1000.0); // far past exp overflow
}

TEST_CASE("every forward pass satisfies the recurrence") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u_z(-0.95, 8.0);
    const std::int64_t ks[4] = {1, 0, -1, -2};
    for (int it = 0; it < 60; ++it) {
        const std::int64_t a = 12;
        const std::int64_t k = ks[it % 4];
        const double z = u_z(rng);
        std::vector<double> y(13);
        for (std::int64_t b = 0; b <= 12; ++b)
            y[(std::size_t)b] = hyp2f1_ttrr({a, b, k, z});
        for (std::int64_t b = 1; b <= 11; ++b) {
            const HyperArgs at{a, b, k, z};
            const double lead = (double)((a + b + 1 - k) * (a + b - k));
            const double scale =
                std::max({std::fabs(y[(std::size_t)b - 1]),
                          std::fabs(y[(std::size_t)b]),
                          std::fabs(y[(std::size_t)b + 1])}) *
                std::max(std::fabs(lead) * (1.0 + std::fabs(z)), 1.0);
            CHECK(std::fabs(ttrr_residual(at, y[(std::size_t)b - 1],
                                          y[(std::size_t)b],
                                          y[(std::size_t)b + 1])) <
                  1e-10 * scale);
        }
    }
}
