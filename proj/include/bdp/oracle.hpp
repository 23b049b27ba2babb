#ifndef BDP_ORACLE_HPP
#define BDP_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "bdp/hypergeom.hpp"
#include "bdp/rates.hpp"
#include "bdp/transition.hpp"

namespace bdp {

// Reference implementations used to certify the fast path.  The recurrence
// code never calls into this module.
struct PrecisionConfig {
    int working_bits = 256;
    std::int64_t truncation = 2000; // tail cut for normalization-type sums
};

void validate(const PrecisionConfig& cfg);

// Direct summation of the terminating series with exact rational binomial
// coefficients and exact rational powers of z; rounded once at the end.
double hyp2f1_reference(const HyperArgs& args);

// Naive series evaluated at `working_bits` precision; cancellation is
// harmless at 256 bits for desk-scale indices.  Interior domain only
// (i, j >= 1 and t, lambda, mu > 0).
double log_prob_reference(const TransitionQuery& q, const Rates& rates,
                          const PrecisionConfig& cfg = {});

// |1 - ref(bits_lo) / ref(bits_hi)| evaluated before any rounding to
// double; the precision-saturation check of the oracle itself.
double reference_precision_gap(const TransitionQuery& q, const Rates& rates,
                               int bits_lo, int bits_hi);

// The same naive series at machine precision with log-space binomial
// coefficients and plain recursive summation: the deliberately unstable
// baseline.  May return NaN when cancellation destroys the sum.
double naive_log_prob_double(const TransitionQuery& q, const Rates& rates);

enum class ScanMethod { naive, ttrr };

struct ScanGrid {
    std::int64_t i = 25;
    std::int64_t j = 35;
    double t = 2.0;
    std::vector<double> lambdas;
    std::vector<double> mus;
};

struct ScanPoint {
    double lambda;
    double mu;
    double log_ref;
    double log_method;
    double rel_err; // |1 - log_method / log_ref|
};

// Per-point relative error of the requested method against the
// high-precision reference over the Cartesian grid.
std::vector<ScanPoint> relative_error_scan(const ScanGrid& grid,
                                           ScanMethod method,
                                           const PrecisionConfig& cfg = {});

} // namespace bdp

#endif
