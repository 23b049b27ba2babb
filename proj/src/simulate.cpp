#include "bdp/simulate.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace bdp {

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Uniform in [0, 1) from the top 53 bits; the engine stream is specified by
// the standard, so sequences are reproducible across platforms.
inline double u01(std::mt19937_64& eng) {
    return (double)(eng() >> 11) * 0x1.0p-53;
}

constexpr std::size_t kEventCap = 100000000;

} // namespace

std::uint64_t child_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    s = mix64(s);
    return mix64(s ^ 0xD1B54A32D192ED03ULL);
}

EventHistory simulate_history(std::int64_t i0, double horizon,
                              const Rates& rates, std::uint64_t seed) {
    if (i0 < 0) throw domain_error("initial size must be non-negative");
    if (!std::isfinite(horizon) || horizon < 0.0)
        throw domain_error("horizon must be finite and non-negative");
    validate(rates);

    EventHistory h;
    h.initial = i0;
    h.horizon = horizon;

    const double total = rates.lambda + rates.mu;
    if (i0 == 0 || total == 0.0 || horizon == 0.0) return h;

    std::mt19937_64 eng(seed);
    const double p_birth = rates.lambda / total;
    std::int64_t n = i0;
    double t = 0.0;
    while (true) {
        const double rate = (double)n * total;
        const double wait = -std::log1p(-u01(eng)) / rate;
        t += wait;
        if (!(t <= horizon)) break;
        // Rounding can stall the clock for huge populations; keep event
        // times strictly increasing.
        if (!h.events.empty() && t <= h.events.back().time)
            t = std::nextafter(h.events.back().time,
                               std::numeric_limits<double>::infinity());
        if (t > horizon) break;
        const bool birth = u01(eng) < p_birth;
        n += birth ? 1 : -1;
        h.events.push_back({t, birth ? EventKind::birth : EventKind::death});
        if (n == 0) break;
        if (h.events.size() >= kEventCap)
            throw numeric_error("trajectory exceeded the event cap; the "
                                "population is exploding");
    }
    return h;
}

ObservedSeries sample_at_times(const EventHistory& h,
                               const std::vector<double>& times) {
    if (times.empty()) throw domain_error("at least one sampling time required");
    if (times.front() != 0.0)
        throw domain_error("the first sampling time must be 0");
    for (std::size_t s = 0; s < times.size(); ++s) {
        if (!std::isfinite(times[s]) || times[s] < 0.0 || times[s] > h.horizon)
            throw domain_error("sampling times must lie within [0, horizon]");
        if (s > 0 && !(times[s] > times[s - 1]))
            throw domain_error("sampling times must be strictly increasing");
    }

    std::vector<std::int64_t> counts(times.size());
    std::int64_t n = h.initial;
    std::size_t e = 0;
    for (std::size_t s = 0; s < times.size(); ++s) {
        while (e < h.events.size() && h.events[e].time <= times[s]) {
            n += h.events[e].kind == EventKind::birth ? 1 : -1;
            ++e;
        }
        counts[s] = n;
    }
    return ObservedSeries(times, std::move(counts));
}

SufficientStats sufficient_stats(const EventHistory& h) {
    SufficientStats st;
    long double exposure = 0.0L;
    std::int64_t n = h.initial;
    double prev = 0.0;
    for (const Event& ev : h.events) {
        exposure += (long double)n * ((long double)ev.time - (long double)prev);
        if (ev.kind == EventKind::birth) {
            ++st.births;
            ++n;
        } else {
            ++st.deaths;
            --n;
        }
        prev = ev.time;
    }
    exposure += (long double)n * ((long double)h.horizon - (long double)prev);
    st.exposure = (double)exposure;
    return st;
}

} // namespace bdp
