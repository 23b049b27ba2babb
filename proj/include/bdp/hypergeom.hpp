#ifndef BDP_HYPERGEOM_HPP
#define BDP_HYPERGEOM_HPP

#include <cstdint>

#include "bdp/errors.hpp"

namespace bdp {

// Arguments of the terminating Gaussian hypergeometric function
// 2F1(-a, -b; -(a + b - k); -z), the family the transition probability
// factors through.  a and b are non-negative integers, k ranges over
// {1, 0, -1, -2, ...}, z is real and greater than -1.
struct HyperArgs {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t k = 1;
    double z = 0.0;
};

void validate(const HyperArgs& args);

// Value carried as sign * exp(log_abs); sign is 0 for an exact zero.
struct SignedLog {
    int sign;
    double log_abs;
};

// 2F1(-a, -b; -(a+b-k); -z) by the forward recurrence in its ratio form,
// iterated along min(a, b) so the forward direction stays on the
// pseudo-dominant side for every z > -1.  Symmetric in (a, b).
double hyp2f1_ttrr(const HyperArgs& args);

// Same recursion with the magnitude accumulated in log space, for indices
// large enough that the plain value would overflow.
SignedLog hyp2f1_ttrr_log(const HyperArgs& args);

// One backward step: y_b reconstructed from y_{b+1} and y_{b+2}.  Test
// utility only; the evaluation path never travels backward.
double backward_step(const HyperArgs& args, double y_b1, double y_b2);

// Left-hand side of the three-term recurrence at index b = args.b; exact
// solutions make it vanish.
double ttrr_residual(const HyperArgs& args, double y_prev, double y_cur,
                     double y_next);

} // namespace bdp

#endif
