#ifndef BDP_INFERENCE_HPP
#define BDP_INFERENCE_HPP

#include <cstdint>

#include "bdp/gradients.hpp"
#include "bdp/rates.hpp"
#include "bdp/series.hpp"

namespace bdp {

struct FitOptions {
    double tol = 1e-8;    // gradient norm target, scaled by 1 + |loglik|
    int max_iter = 200;
    int n_restarts = 5;   // jittered restarts; the best optimum is reported
    // Drop series that are extinct at their first sampled point before
    // fitting (the Monte Carlo study protocol).  Off by default: such series
    // still carry exact likelihood information.
    bool condition_on_survival = false;
};

struct FitResult {
    Rates rates;
    double theta = 0.0;
    double se_lambda = 0.0; // NaN when the observed information is not
    double se_mu = 0.0;     // positive definite
    double se_theta = 0.0;
    double loglik = 0.0;
    bool converged = false;
    bool at_boundary = false; // one rate pinned (numerically) at zero
    int iterations = 0;
    HessLogP hessian; // of the log-likelihood at the optimum
};

// Sum of log transition probabilities over all consecutive pairs of every
// series; -infinity when any transition is impossible.
double loglik(const Rates& rates, const ObservationSet& data);

// Per-transition analytic derivatives, accumulated.  Discontinuity errors
// from the boundary sub-domains propagate.
GradLogP loglik_grad(const Rates& rates, const ObservationSet& data);
HessLogP loglik_hessian(const Rates& rates, const ObservationSet& data);

// Continuous-observation log-likelihood B log(lambda) + D log(mu) -
// (lambda + mu) X, up to an additive data constant.
double loglik_continuous(const Rates& rates, const SufficientStats& stats);

// Closed-form continuous-observation estimators (B/X, D/X).
Rates mle_continuous(const SufficientStats& stats);

// Closed-form growth-rate estimator for equidistant sampling:
// log(sum of counts after the start / sum of counts before the end) / tau.
double theta_hat_equidistant(const ObservedSeries& series);

// Newton-Raphson maximum likelihood in (log lambda, log mu) coordinates
// with delta-method standard errors from the observed information.
FitResult fit_mle(const ObservationSet& data, const FitOptions& opts = {});

} // namespace bdp

#endif
