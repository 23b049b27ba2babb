#include <doctest.h>

#include <cmath>
#include <vector>

#include "bdp/simulate.hpp"
#include "bdp/transition.hpp"

using namespace bdp;

TEST_CASE("frozen process produces no events") {
    const EventHistory h = simulate_history(5, 10.0, {0.0, 0.0}, 42);
    CHECK(h.events.empty());
    CHECK(h.initial == 5);
    const ObservedSeries s = sample_at_times(h, {0.0, 2.0, 10.0});
    for (std::int64_t c : s.counts()) CHECK(c == 5);
}

TEST_CASE("determinism of the event stream") {
    const EventHistory a = simulate_history(20, 5.0, {0.8, 0.6}, 12345);
    const EventHistory b = simulate_history(20, 5.0, {0.8, 0.6}, 12345);
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t e = 0; e < a.events.size(); ++e) {
        CHECK(a.events[e].time == b.events[e].time);
        CHECK(a.events[e].kind == b.events[e].kind);
    }
    const EventHistory c = simulate_history(20, 5.0, {0.8, 0.6}, 12346);
    CHECK(a.events.size() != c.events.size());
}

TEST_CASE("event times strictly increase and extinction is absorbing") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const EventHistory h = simulate_history(3, 8.0, {0.5, 1.5}, seed);
        std::int64_t n = h.initial;
        double prev = 0.0;
        for (const Event& e : h.events) {
            CHECK(e.time > prev);
            CHECK(e.time <= h.horizon);
            CHECK(n > 0); // no events once extinct
            n += e.kind == EventKind::birth ? 1 : -1;
            CHECK(n >= 0);
            prev = e.time;
        }
    }
}

TEST_CASE("mean final size matches the first moment") {
    const Rates rates{0.305, 0.236};
    const int n_sims = 10000;
    long double sum = 0.0L, sumsq = 0.0L;
    for (int s = 0; s < n_sims; ++s) {
        const EventHistory h =
            simulate_history(100, 10.0, rates, child_seed(77, (std::uint64_t)s));
        const ObservedSeries series = sample_at_times(h, {0.0, 10.0});
        const double final = (double)series.counts()[1];
        sum += final;
        sumsq += final * final;
    }
    const double mean = (double)(sum / n_sims);
    const double var = (double)(sumsq / n_sims) - mean * mean;
    const double se = std::sqrt(var / n_sims);
    CHECK(std::fabs(mean - mean_size(100, 10.0, rates)) < 3.0 * se);
}

TEST_CASE("final-size distribution matches the transition law") {
    const Rates rates{1.0, 1.0};
    const int n_sims = 100000;
    std::vector<int> freq(8, 0);
    for (int s = 0; s < n_sims; ++s) {
        const EventHistory h =
            simulate_history(1, 1.0, rates, child_seed(2024, (std::uint64_t)s));
        const ObservedSeries series = sample_at_times(h, {0.0, 1.0});
        const std::int64_t final = series.counts()[1];
        if (final < (std::int64_t)freq.size()) ++freq[(std::size_t)final];
    }
    for (std::int64_t j = 0; j <= 5; ++j) {
        const double p = transition_prob({1, j, 1.0}, rates);
        const double se = std::sqrt(p * (1.0 - p) / n_sims);
        CHECK(std::fabs((double)freq[(std::size_t)j] / n_sims - p) < 4.0 * se);
    }
}

TEST_CASE("sampling conventions") {
    EventHistory h;
    h.initial = 4;
    h.horizon = 2.0;
    h.events = {{0.5, EventKind::birth}, {1.25, EventKind::death}};

    const ObservedSeries s = sample_at_times(h, {0.0, 1.0});
    CHECK(s.counts()[0] == 4);
    CHECK(s.counts()[1] == 5);

    // Right-continuous at the event instant itself.
    const ObservedSeries at = sample_at_times(h, {0.0, 0.5, 1.25, 2.0});
    CHECK(at.counts()[1] == 5);
    CHECK(at.counts()[2] == 4);

    CHECK_THROWS_AS(sample_at_times(h, {0.5, 1.0}), domain_error);
    CHECK_THROWS_AS(sample_at_times(h, {0.0, 3.0}), domain_error);
    CHECK_THROWS_AS(sample_at_times(h, {0.0, 1.0, 1.0}), domain_error);
    CHECK_THROWS_AS(sample_at_times(h, std::vector<double>{}), domain_error);
}

TEST_CASE("sufficient statistics of explicit histories") {
    EventHistory still;
    still.initial = 2;
    still.horizon = 3.0;
    const SufficientStats a = sufficient_stats(still);
    CHECK(a.births == 0);
    CHECK(a.deaths == 0);
    CHECK(a.exposure == doctest::Approx(6.0).epsilon(1e-15));

    EventHistory one;
    one.initial = 1;
    one.horizon = 3.0;
    one.events = {{1.0, EventKind::death}};
    const SufficientStats b = sufficient_stats(one);
    CHECK(b.births == 0);
    CHECK(b.deaths == 1);
    CHECK(b.exposure == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("exposure is additive under splitting") {
    const EventHistory whole = simulate_history(15, 6.0, {0.9, 0.7}, 555);
    const double cut = 2.7;

    EventHistory left, right;
    left.initial = whole.initial;
    left.horizon = cut;
    std::int64_t n = whole.initial;
    for (const Event& e : whole.events) {
        if (e.time <= cut) {
            left.events.push_back(e);
            n += e.kind == EventKind::birth ? 1 : -1;
        } else {
            right.events.push_back({e.time - cut, e.kind});
        }
    }
    right.initial = n;
    right.horizon = whole.horizon - cut;

    const SufficientStats w = sufficient_stats(whole);
    const SufficientStats l = sufficient_stats(left);
    const SufficientStats r = sufficient_stats(right);
    CHECK(w.births == l.births + r.births);
    CHECK(w.deaths == l.deaths + r.deaths);
    CHECK(w.exposure ==
          doctest::Approx(l.exposure + r.exposure).epsilon(1e-12));
}

TEST_CASE("child seeds separate streams") {
    CHECK(child_seed(1, 0) != child_seed(1, 1));
    CHECK(child_seed(1, 0) != child_seed(2, 0));
    CHECK(child_seed(7, 3) == child_seed(7, 3));
}

TEST_CASE("simulation input validation") {
    CHECK_THROWS_AS(simulate_history(-1, 1.0, {1.0, 1.0}, 0), domain_error);
    CHECK_THROWS_AS(simulate_history(1, -1.0, {1.0, 1.0}, 0), domain_error);
    CHECK_THROWS_AS(simulate_history(1, 1.0, {-1.0, 1.0}, 0), domain_error);
}
