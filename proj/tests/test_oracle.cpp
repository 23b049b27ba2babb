#include <doctest.h>

#include <cmath>

#include "bdp/kernel.hpp"
#include "bdp/oracle.hpp"
#include "bdp/transition.hpp"

using namespace bdp;

namespace {
double rel_diff(double a, double b) {
    return std::fabs(a - b) / std::max(std::fabs(b), 1e-300);
}
} // namespace

TEST_CASE("exact rational reference values") {
    CHECK(hyp2f1_reference({2, 2, 1, 1.0}) == 8.0 / 3.0);
    CHECK(hyp2f1_reference({9, 0, 1, 3.7}) == 1.0);
    CHECK(hyp2f1_reference({3, 1, 1, 2.0}) == 3.0);
}

TEST_CASE("high-precision sum against the closed form at t = xi") {
    const Rates rates{2.0, 0.5};
    const double xi = xi_threshold(rates);
    const TransitionQuery q{4, 6, xi};
    const double closed = log_transition_prob(q, rates);
    CHECK(rel_diff(log_prob_reference(q, rates), closed) < 1e-13);
}

TEST_CASE("dual-path agreement on a well-conditioned point") {
    const TransitionQuery q{25, 35, 2.0};
    CHECK(rel_diff(log_transition_prob(q, {1.0, 0.1}),
                   log_prob_reference(q, {1.0, 0.1})) < 1e-12);
    CHECK(std::isfinite(log_prob_reference(q, {1.0, 1.2})));
}

TEST_CASE("interior-domain validation") {
    CHECK_THROWS_AS(log_prob_reference({0, 3, 1.0}, {1.0, 1.0}), domain_error);
    CHECK_THROWS_AS(log_prob_reference({3, 3, 0.0}, {1.0, 1.0}), domain_error);
    CHECK_THROWS_AS(log_prob_reference({3, 3, 1.0}, {0.0, 1.0}), domain_error);
    PrecisionConfig cfg;
    cfg.working_bits = 64;
    CHECK_THROWS_AS(log_prob_reference({3, 3, 1.0}, {1.0, 1.0}, cfg),
                    domain_error);
}

TEST_CASE("naive double baseline: stable below the sign change, unstable above") {
    const TransitionQuery q{25, 35, 2.0};
    // gamma > 0 for mu below roughly 0.2032 at t = 2, lambda = 1
    const double err_good =
        rel_diff(naive_log_prob_double(q, {1.0, 0.1}),
                 log_prob_reference(q, {1.0, 0.1}));
    CHECK(err_good < 1e-12);

    const double ref = log_prob_reference(q, {1.0, 1.5});
    const double naive = naive_log_prob_double(q, {1.0, 1.5});
    const double err_naive =
        std::isfinite(naive) ? std::fabs(1.0 - naive / ref) : 1.0;
    const double err_ttrr =
        std::fabs(1.0 - log_transition_prob(q, {1.0, 1.5}) / ref);
    CHECK(err_naive > 1e3 * err_ttrr);
}

TEST_CASE("naive double baseline at the single-term point t = xi") {
    const Rates rates{2.0, 0.5};
    const double xi = xi_threshold(rates);
    const TransitionQuery q{25, 35, xi};
    CHECK(rel_diff(naive_log_prob_double(q, rates),
                   log_transition_prob(q, rates)) < 1e-12);
}

TEST_CASE("precision saturation of the reference") {
    // Doubling the working precision leaves the reference unchanged well
    // past any tolerance used to certify the fast path.
    const TransitionQuery q{25, 35, 2.0};
    for (int k = 25; k <= 500; k += 50)
        CHECK(reference_precision_gap(q, {1.0, 2.5 * k / 500.0}, 256, 512) <
              1e-20);
    CHECK(reference_precision_gap(q, {1.0, 1.0}, 256, 512) < 1e-20);
    CHECK_THROWS_AS(reference_precision_gap(q, {1.0, 1.0}, 64, 512),
                    domain_error);
}

TEST_CASE("reference agreement with the recurrence path (spot checks)") {
    const TransitionQuery q{25, 35, 2.0};
    for (double mu : {0.05, 0.5, 0.9999, 1.0, 1.0001, 1.7, 2.5}) {
        const double ref = log_prob_reference(q, {1.0, mu});
        const double fast = log_transition_prob(q, {1.0, mu});
        CHECK(std::fabs(1.0 - fast / ref) < 1e-10);
    }
}

TEST_CASE("scan plumbing") {
    ScanGrid grid;
    grid.i = 25;
    grid.j = 35;
    grid.t = 2.0;
    grid.lambdas = {1.0};
    grid.mus = {0.1, 0.5, 1.0, 2.0};
    const auto pts = relative_error_scan(grid, ScanMethod::ttrr);
    REQUIRE(pts.size() == 4);
    for (const ScanPoint& p : pts) {
        CHECK(p.lambda == 1.0);
        CHECK(std::isfinite(p.log_ref));
        CHECK(p.rel_err < 1e-10);
    }
    CHECK_THROWS_AS(relative_error_scan({25, 35, 2.0, {}, {}},
                                        ScanMethod::ttrr),
                    domain_error);
}
