#ifndef BDP_GRADIENTS_HPP
#define BDP_GRADIENTS_HPP

#include "bdp/rates.hpp"
#include "bdp/transition.hpp"

namespace bdp {

// Gradient of log p(j | i, t, lambda, mu) in (lambda, mu).
struct GradLogP {
    double d_lambda = 0.0;
    double d_mu = 0.0;
};

// Symmetric 2x2 Hessian, lower triangle.
struct HessLogP {
    double d_ll = 0.0;
    double d_lm = 0.0;
    double d_mm = 0.0;
};

// Analytic first derivatives across every parameter sub-domain: interior
// (unequal rates), equal rates, mu = 0, lambda = 0, t = 0, and the origin.
// Exact integer coincidences where a one-sided limit diverges raise
// discontinuity_error; zero-probability transitions raise undefined_error.
GradLogP log_prob_grad(const TransitionQuery& q, const Rates& rates);

// Second derivatives over the same sub-domains.
HessLogP log_prob_hessian(const TransitionQuery& q, const Rates& rates);

} // namespace bdp

#endif
