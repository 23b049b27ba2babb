#ifndef BDP_SIMULATE_HPP
#define BDP_SIMULATE_HPP

#include <cstdint>
#include <vector>

#include "bdp/rates.hpp"
#include "bdp/series.hpp"

namespace bdp {

enum class EventKind : std::uint8_t { birth, death };

struct Event {
    double time;
    EventKind kind;
};

// A continuously observed trajectory: initial size plus the time-ordered
// birth/death events up to the horizon.  The running size is
// right-continuous and never negative; no events occur after extinction.
struct EventHistory {
    std::int64_t initial = 0;
    double horizon = 0.0;
    std::vector<Event> events;
};

// Deterministic stream splitting: replicate r of a study seeded with s draws
// from the generator seeded with child_seed(s, r).
std::uint64_t child_seed(std::uint64_t seed, std::uint64_t stream);

// Exact event-level simulation: at size n the holding time is
// Exponential(n (lambda + mu)) and the event is a birth with probability
// lambda / (lambda + mu).  Identical seeds give identical histories.
EventHistory simulate_history(std::int64_t i0, double horizon,
                              const Rates& rates, std::uint64_t seed);

// Population size at each requested time (right-continuous at event
// instants).  Times must be strictly increasing, start at 0, and stay
// within the horizon.
ObservedSeries sample_at_times(const EventHistory& h,
                               const std::vector<double>& times);

// (B, D, X): birth count, death count, and the exact integral of the
// piecewise-constant size over [0, horizon].
SufficientStats sufficient_stats(const EventHistory& h);

} // namespace bdp

#endif
