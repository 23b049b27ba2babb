#include "bdp/series.hpp"

#include <cmath>
#include <utility>

namespace bdp {

ObservedSeries::ObservedSeries(std::vector<double> times,
                               std::vector<std::int64_t> counts)
    : times_(std::move(times)), counts_(std::move(counts)) {
    if (times_.size() != counts_.size())
        throw domain_error("series times and counts must have equal length");
    if (times_.size() < 2)
        throw domain_error("a series needs at least two observations");
    for (std::size_t s = 0; s < times_.size(); ++s) {
        if (!std::isfinite(times_[s]) || times_[s] < 0.0)
            throw domain_error("observation times must be finite and >= 0");
        if (s > 0 && !(times_[s] > times_[s - 1]))
            throw domain_error("observation times must be strictly increasing");
        if (counts_[s] < 0)
            throw domain_error("population counts must be non-negative");
        if (s > 0 && counts_[s - 1] == 0 && counts_[s] != 0)
            throw domain_error(
                "extinction is absorbing: a zero count cannot be followed by a "
                "positive one");
    }
}

void validate(const ObservationSet& data) {
    if (data.series.empty())
        throw domain_error("observation set must contain at least one series");
}

void validate(const SufficientStats& stats) {
    if (stats.births < 0 || stats.deaths < 0)
        throw domain_error("birth and death counts must be non-negative");
    if (!std::isfinite(stats.exposure) || stats.exposure < 0.0)
        throw domain_error("exposure must be finite and non-negative");
}

} // namespace bdp
