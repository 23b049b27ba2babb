#ifndef BDP_TRANSITION_HPP
#define BDP_TRANSITION_HPP

#include <cstdint>

#include "bdp/rates.hpp"

namespace bdp {

// One probability query: start size i, end size j, elapsed time t.
struct TransitionQuery {
    std::int64_t i = 0;
    std::int64_t j = 0;
    double t = 0.0;
};

void validate(const TransitionQuery& q);

// log p(j | i, t, lambda, mu).  Structurally impossible transitions return
// -infinity; the interior case goes through the hypergeometric
// representation with the stable recurrence.
double log_transition_prob(const TransitionQuery& q, const Rates& rates);

// exp of the above, clamped to [0, 1].
double transition_prob(const TransitionQuery& q, const Rates& rates);

// log p(0 | i, t): the population is extinct at time t.  i = 0 gives 0
// (already extinct); a pure birth process never goes extinct.
double log_extinction_prob(std::int64_t i, double t, const Rates& rates);

// First moment i * e^{(lambda - mu) t}; validation aid for the probability
// mass.
double mean_size(std::int64_t i, double t, const Rates& rates);

} // namespace bdp

#endif
