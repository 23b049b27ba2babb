#ifndef BDP_GLM_HPP
#define BDP_GLM_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "bdp/rates.hpp"

namespace bdp {

// One independent dose-response observation: a single transition from n0 to
// nt over time t at antibody/drug concentration `dose`.
struct DoseRecord {
    double dose = 0.0;
    double t = 0.0;
    std::int64_t n0 = 0;
    std::int64_t nt = 0;
};

struct GlmOptions {
    bool fit_slopes = true; // log-linear dose effect on both rates
    double tol = 1e-8;
    int max_iter = 200;
    int n_restarts = 5;
};

struct DoseEstimate {
    double dose;
    double lambda, se_lambda;
    double mu, se_mu;
    double theta, se_theta;
};

// Fit of log lambda(c) = alpha_lambda + beta_lambda log(1 + c) and
// log mu(c) = alpha_mu + beta_mu log(1 + c).
struct GlmFit {
    double alpha_lambda = 0.0;
    double beta_lambda = 0.0;
    double alpha_mu = 0.0;
    double beta_mu = 0.0;
    Eigen::Matrix4d covariance = Eigen::Matrix4d::Zero();
    bool covariance_valid = false;
    std::vector<DoseEstimate> per_dose; // delta-method rates per distinct dose
    double loglik = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Maximum likelihood for the dose-response model by safeguarded Newton on
// the chain-ruled gradient and Hessian.  A design with a single dose level
// cannot identify the slopes and is rejected with advice to refit
// slope-free.
GlmFit fit_glm(const std::vector<DoseRecord>& records,
               const GlmOptions& opts = {});

} // namespace bdp

#endif
