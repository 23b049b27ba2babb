#ifndef BDP_SERIES_HPP
#define BDP_SERIES_HPP

#include <cstdint>
#include <vector>

#include "bdp/errors.hpp"

namespace bdp {

// Discretely sampled population counts at strictly increasing times.
// Extinction is absorbing: once a count is zero every later count is zero.
class ObservedSeries {
  public:
    ObservedSeries(std::vector<double> times, std::vector<std::int64_t> counts);

    const std::vector<double>& times() const { return times_; }
    const std::vector<std::int64_t>& counts() const { return counts_; }
    std::size_t size() const { return times_.size(); }

    // True when the population is already extinct at the first sampled point
    // after the start.
    bool extinct_at_first_sample() const { return counts_[1] == 0; }

  private:
    std::vector<double> times_;
    std::vector<std::int64_t> counts_;
};

// Independent replicates sharing one rate pair.
struct ObservationSet {
    std::vector<ObservedSeries> series;
};

void validate(const ObservationSet& data);

// Totals of a continuously observed trajectory: births, deaths, and the
// integral of the population size over the observation window.
struct SufficientStats {
    std::int64_t births = 0;
    std::int64_t deaths = 0;
    double exposure = 0.0;
};

void validate(const SufficientStats& stats);

} // namespace bdp

#endif
