#ifndef BDP_KERNEL_HPP
#define BDP_KERNEL_HPP

#include <cstdint>

#include "bdp/rates.hpp"

namespace bdp {

// Scalar building blocks of the transition probability.  All functions are
// pure; every e^{(lambda-mu)t} - 1 goes through expm1 so the unequal-rates
// branch stays accurate arbitrarily close to lambda == mu.
struct KernelValues {
    double phi;
    double alpha;   // mu * phi
    double beta;    // lambda * phi
    double gamma;   // 1 - alpha - beta
    double z;       // gamma / (alpha * beta); NaN unless has_z
    bool has_z;
};

// True when |lambda - mu| * t is too small for the unequal-rates ratio to
// retain significant digits; the limit formulas take over below this scale.
bool equal_rates_regime(double t, const Rates& rates);

double phi(double t, const Rates& rates);
double gamma_coef(double t, const Rates& rates);

// Sign-change threshold of gamma: gamma > 0 for t < xi, < 0 for t > xi.
// Requires both rates strictly positive.
double xi_threshold(const Rates& rates);

// z = gamma / (alpha * beta); requires t, lambda, mu all strictly positive.
// Always > -1 (clamped to the nearest representable value above -1 in the
// asymptotic regime where the true gap is below machine precision).
double z_arg(double t, const Rates& rates);

// log of the leading series term binom(i+j-1, i-1) * alpha^i * beta^j,
// computed entirely in log space.  Requires i, j >= 1 and t, lambda, mu > 0.
double log_omega(std::int64_t i, std::int64_t j, double t, const Rates& rates);

// log binom(n, r) for 0 <= r <= n.  Exactly 0 at the edges; otherwise a
// cumulative product in extended precision (log-gamma only for huge n).
double log_binomial(std::int64_t n, std::int64_t r);

KernelValues kernel_values(double t, const Rates& rates);

namespace detail {
// Extended-precision internals shared with the transition and derivative
// code.  Inputs are assumed validated.
long double phi_ld(double t, const Rates& rates);
long double log_phi_ld(double t, const Rates& rates);
long double gamma_ld(double t, const Rates& rates);
long double z_ld(double t, const Rates& rates);
} // namespace detail

} // namespace bdp

#endif
