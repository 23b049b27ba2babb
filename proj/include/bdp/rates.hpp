#ifndef BDP_RATES_HPP
#define BDP_RATES_HPP

#include <cmath>
#include <cstdint>

#include "bdp/errors.hpp"

namespace bdp {

// Per-capita birth and death intensities of the linear process.  At size j
// the total rates are j*lambda and j*mu; both must be finite and >= 0.
struct Rates {
    double lambda = 0.0;
    double mu = 0.0;
};

inline void validate(const Rates& r) {
    if (!std::isfinite(r.lambda) || r.lambda < 0.0)
        throw domain_error("lambda must be finite and non-negative");
    if (!std::isfinite(r.mu) || r.mu < 0.0)
        throw domain_error("mu must be finite and non-negative");
}

inline void validate_time(double t) {
    if (!std::isfinite(t) || t < 0.0)
        throw domain_error("t must be finite and non-negative");
}

} // namespace bdp

#endif
