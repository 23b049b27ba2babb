#ifndef BDP_ERRORS_HPP
#define BDP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bdp {

// Invalid arguments: negative rates, non-finite times, malformed data.
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Floating-point degeneracy on an otherwise valid input, e.g. a recurrence
// ratio collapsing to zero or a hypergeometric factor losing its sign.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A derivative diverging at one of the exact integer coincidences on the
// rate axes.  `divergence_sign` is the sign of the one-sided limit taken
// from the side where the data have positive probability, so callers can
// treat the boundary as repelling (+1) or attracting (-1).
struct discontinuity_error : std::runtime_error {
    int divergence_sign;
    explicit discontinuity_error(const std::string& what, int sign = +1)
        : std::runtime_error(what), divergence_sign(sign) {}
};

// Quantity that is mathematically undefined for the given (valid) input:
// gradients of zero-probability transitions, estimators without a first
// moment, fits on completely uninformative data.
struct undefined_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace bdp

#endif
