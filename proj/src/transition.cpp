#include "bdp/transition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bdp/hypergeom.hpp"
#include "bdp/kernel.hpp"

namespace bdp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Closed form at the gamma = 0 point t = xi: the series collapses to its
// first term with alpha = mu / (lambda + mu) and beta = lambda / (lambda + mu).
double log_prob_at_xi(std::int64_t i, std::int64_t j, const Rates& rates) {
    const long double lam = rates.lambda;
    const long double mu = rates.mu;
    const long double tot = lam + mu;
    return (double)((long double)log_binomial(i + j - 1, i - 1) +
                    (long double)i * logl(mu / tot) +
                    (long double)j * logl(lam / tot));
}

} // namespace

void validate(const TransitionQuery& q) {
    if (q.i < 0 || q.j < 0)
        throw domain_error("population sizes i, j must be non-negative");
    validate_time(q.t);
}

double log_extinction_prob(std::int64_t i, double t, const Rates& rates) {
    if (i < 0) throw domain_error("population size i must be non-negative");
    validate_time(t);
    validate(rates);
    if (i == 0) return 0.0;
    if (t == 0.0 || rates.mu == 0.0) return kNegInf;
    if (rates.lambda == 0.0) {
        // (1 - e^{-mu t})^i
        return (double)((long double)i *
                        logl(-expm1l(-(long double)rates.mu * (long double)t)));
    }
    // alpha^i in general; the equal-rates branch of log_phi covers mu = lambda.
    return (double)((long double)i * (logl((long double)rates.mu) +
                                      detail::log_phi_ld(t, rates)));
}

double log_transition_prob(const TransitionQuery& q, const Rates& rates) {
    validate(q);
    validate(rates);
    const std::int64_t i = q.i;
    const std::int64_t j = q.j;
    const double t = q.t;

    if (t == 0.0) return j == i ? 0.0 : kNegInf;
    if (i == 0) return j == 0 ? 0.0 : kNegInf;
    if (j == 0) return log_extinction_prob(i, t, rates);
    if (rates.lambda == 0.0 && rates.mu == 0.0) return j == i ? 0.0 : kNegInf;

    if (rates.mu == 0.0) {
        // Pure birth: binom(j-1, i-1) e^{-j lambda t} (e^{lambda t} - 1)^{j-i}
        if (j < i) return kNegInf;
        const long double lt = (long double)rates.lambda * (long double)t;
        return (double)((long double)log_binomial(j - 1, i - 1) -
                        (long double)j * lt +
                        (long double)(j - i) * logl(expm1l(lt)));
    }
    if (rates.lambda == 0.0) {
        // Pure death: binom(i, j) e^{-i mu t} (e^{mu t} - 1)^{i-j}
        if (j > i) return kNegInf;
        const long double mt = (long double)rates.mu * (long double)t;
        return (double)((long double)log_binomial(i, j) -
                        (long double)i * mt +
                        (long double)(i - j) * logl(expm1l(mt)));
    }

    const double xi = xi_threshold(rates);
    const double ulp = std::nextafter(xi, std::numeric_limits<double>::infinity()) - xi;
    if (std::fabs(t - xi) <= 4.0 * ulp) return log_prob_at_xi(i, j, rates);

    const double z = z_arg(t, rates);
    const SignedLog f = hyp2f1_ttrr_log({i, j, 1, z});
    if (f.sign <= 0)
        throw numeric_error(
            "hypergeometric factor lost positivity; probability degenerate");
    return log_omega(i, j, t, rates) + f.log_abs;
}

double transition_prob(const TransitionQuery& q, const Rates& rates) {
    const double lp = log_transition_prob(q, rates);
    if (lp == kNegInf) return 0.0;
    return std::min(1.0, std::exp(lp));
}

double mean_size(std::int64_t i, double t, const Rates& rates) {
    if (i < 0) throw domain_error("population size i must be non-negative");
    validate_time(t);
    validate(rates);
    const double theta = rates.lambda - rates.mu;
    return (double)i * std::exp(theta * t);
}

} // namespace bdp
