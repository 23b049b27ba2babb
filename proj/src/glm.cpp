#include "bdp/glm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bdp/gradients.hpp"
#include "bdp/transition.hpp"
#include "optimize.hpp"

namespace bdp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate(const std::vector<DoseRecord>& records) {
    if (records.empty()) throw domain_error("no dose records");
    for (const DoseRecord& r : records) {
        if (!std::isfinite(r.dose) || r.dose < 0.0)
            throw domain_error("dose must be finite and non-negative");
        if (!std::isfinite(r.t) || !(r.t > 0.0))
            throw domain_error("record time must be finite and positive");
        if (r.n0 < 1) throw domain_error("initial count n0 must be >= 1");
        if (r.nt < 0) throw domain_error("final count nt must be >= 0");
    }
}

// Parameter layout: (alpha_lambda, beta_lambda, alpha_mu, beta_mu); the
// slope entries are fixed at zero when slopes are disabled.
Rates rates_at(const Eigen::Vector4d& p, double logdose) {
    return {std::exp(p[0] + p[1] * logdose), std::exp(p[2] + p[3] * logdose)};
}

Eigen::Vector4d embed(const Eigen::VectorXd& x, bool slopes) {
    Eigen::Vector4d p;
    if (slopes)
        p << x[0], x[1], x[2], x[3];
    else
        p << x[0], 0.0, x[1], 0.0;
    return p;
}

} // namespace

GlmFit fit_glm(const std::vector<DoseRecord>& records, const GlmOptions& opts) {
    validate(records);
    if (!(opts.tol > 0.0)) throw domain_error("tol must be positive");
    if (opts.max_iter < 1) throw domain_error("max_iter must be >= 1");
    if (opts.n_restarts < 1) throw domain_error("n_restarts must be >= 1");

    std::vector<double> logdose(records.size());
    for (std::size_t r = 0; r < records.size(); ++r)
        logdose[r] = std::log1p(records[r].dose);

    if (opts.fit_slopes) {
        const auto [lo, hi] = std::minmax_element(logdose.begin(), logdose.end());
        if (*hi - *lo <= 1e-12 * (1.0 + std::fabs(*hi)))
            throw domain_error(
                "a single dose level cannot identify the slopes; refit "
                "slope-free (--no-slope)");
    }

    const int dim = opts.fit_slopes ? 4 : 2;

    const auto value_fn = [&](const Eigen::VectorXd& x) {
        const Eigen::Vector4d p = embed(x, opts.fit_slopes);
        long double acc = 0.0L;
        try {
            for (std::size_t r = 0; r < records.size(); ++r) {
                const double lp =
                    log_transition_prob({records[r].n0, records[r].nt, records[r].t},
                                        rates_at(p, logdose[r]));
                if (lp == kNegInf) return kNegInf;
                acc += (long double)lp;
            }
        } catch (const numeric_error&) {
            return kNegInf;
        }
        return (double)acc;
    };

    const auto derivs4 = [&](const Eigen::Vector4d& p, Eigen::Vector4d& g,
                             Eigen::Matrix4d& h) {
        g.setZero();
        h.setZero();
        for (std::size_t r = 0; r < records.size(); ++r) {
            const double L = logdose[r];
            const Rates rates = rates_at(p, L);
            const TransitionQuery q{records[r].n0, records[r].nt, records[r].t};
            const GradLogP gg = log_prob_grad(q, rates);
            const HessLogP hh = log_prob_hessian(q, rates);
            const double gl = rates.lambda * gg.d_lambda;
            const double gm = rates.mu * gg.d_mu;
            const double hl = rates.lambda * rates.lambda * hh.d_ll + gl;
            const double hm = rates.mu * rates.mu * hh.d_mm + gm;
            const double hx = rates.lambda * rates.mu * hh.d_lm;
            g[0] += gl;
            g[1] += L * gl;
            g[2] += gm;
            g[3] += L * gm;
            h(0, 0) += hl;
            h(0, 1) += L * hl;
            h(1, 1) += L * L * hl;
            h(2, 2) += hm;
            h(2, 3) += L * hm;
            h(3, 3) += L * L * hm;
            h(0, 2) += hx;
            h(0, 3) += L * hx;
            h(1, 2) += L * hx;
            h(1, 3) += L * L * hx;
        }
        h = h.selfadjointView<Eigen::Upper>();
    };

    const auto derivs_fn = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g,
                               Eigen::MatrixXd& h) {
        const Eigen::Vector4d p = embed(x, opts.fit_slopes);
        Eigen::Vector4d g4;
        Eigen::Matrix4d h4;
        derivs4(p, g4, h4);
        if (opts.fit_slopes) {
            g = g4;
            h = h4;
        } else {
            g.resize(2);
            g << g4[0], g4[2];
            h.resize(2, 2);
            h << h4(0, 0), h4(0, 2), h4(2, 0), h4(2, 2);
        }
    };

    // Start values: pooled single-transition growth estimate, split by the
    // one-step variance match, zero slopes.
    long double theta_acc = 0.0L;
    std::size_t informative = 0;
    for (const DoseRecord& r : records) {
        if (r.nt > 0) {
            theta_acc += logl((long double)r.nt / (long double)r.n0) /
                         (long double)r.t;
            ++informative;
        }
    }
    if (informative == 0)
        throw undefined_error(
            "every record is extinct; the dose-response fit is undefined");
    const double theta0 = (double)(theta_acc / (long double)informative);
    long double rss = 0.0L, denom = 0.0L;
    for (const DoseRecord& r : records) {
        const long double th = (long double)theta0 * (long double)r.t;
        const long double growth = expl(th);
        const long double resid =
            (long double)r.nt - (long double)r.n0 * growth;
        rss += resid * resid;
        const long double unit = fabsl(th) < 1e-8L
                                     ? (long double)r.t
                                     : growth * expm1l(th) / (long double)theta0;
        denom += (long double)r.n0 * unit;
    }
    const double total = denom > 0.0L ? std::max(0.0, (double)(rss / denom)) : 0.0;
    const double lam0 = std::max((total + theta0) / 2.0, 1e-4);
    const double mu0 = std::max((total - theta0) / 2.0, 1e-4);

    Eigen::VectorXd x0(dim);
    if (opts.fit_slopes)
        x0 << std::log(lam0), 0.0, std::log(mu0), 0.0;
    else
        x0 << std::log(lam0), std::log(mu0);

    detail::NewtonOptions nopts;
    nopts.tol = opts.tol;
    nopts.max_iter = opts.max_iter;

    detail::NewtonOutcome best;
    bool have = false;
    std::mt19937_64 jitter(0x6EEDF17ULL);
    std::normal_distribution<double> noise(0.0, 0.5);
    for (int r = 0; r < opts.n_restarts; ++r) {
        Eigen::VectorXd x = x0;
        if (r > 0)
            for (int c = 0; c < dim; ++c) x[c] += noise(jitter);
        detail::NewtonOutcome out =
            detail::maximize_newton(value_fn, derivs_fn, x, nopts);
        const bool better =
            !have || (out.converged && !best.converged) ||
            (out.converged == best.converged && out.value > best.value);
        if (better) {
            best = out;
            have = true;
        }
    }

    GlmFit fit;
    const Eigen::Vector4d p = embed(best.x, opts.fit_slopes);
    fit.alpha_lambda = p[0];
    fit.beta_lambda = p[1];
    fit.alpha_mu = p[2];
    fit.beta_mu = p[3];
    fit.loglik = best.value;
    fit.converged = best.converged;
    fit.iterations = best.iterations;

    // Covariance of the natural parameters from the observed information.
    Eigen::Vector4d g4;
    Eigen::Matrix4d h4;
    derivs4(p, g4, h4);
    if (opts.fit_slopes) {
        Eigen::LLT<Eigen::Matrix4d> llt(-h4);
        if (llt.info() == Eigen::Success) {
            fit.covariance = llt.solve(Eigen::Matrix4d::Identity());
            fit.covariance_valid = true;
        }
    } else {
        Eigen::Matrix2d info;
        info << -h4(0, 0), -h4(0, 2), -h4(2, 0), -h4(2, 2);
        Eigen::LLT<Eigen::Matrix2d> llt(info);
        if (llt.info() == Eigen::Success) {
            const Eigen::Matrix2d cov = llt.solve(Eigen::Matrix2d::Identity());
            fit.covariance.setZero();
            fit.covariance(0, 0) = cov(0, 0);
            fit.covariance(0, 2) = fit.covariance(2, 0) = cov(0, 1);
            fit.covariance(2, 2) = cov(1, 1);
            fit.covariance_valid = true;
        }
    }

    // Per-dose rates with delta-method standard errors.
    std::vector<double> doses;
    for (const DoseRecord& r : records) doses.push_back(r.dose);
    std::sort(doses.begin(), doses.end());
    doses.erase(std::unique(doses.begin(), doses.end()), doses.end());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double c : doses) {
        const double L = std::log1p(c);
        const Rates r = rates_at(p, L);
        DoseEstimate est{c, r.lambda, nan, r.mu, nan, r.lambda - r.mu, nan};
        if (fit.covariance_valid) {
            Eigen::Vector4d gl(r.lambda, r.lambda * L, 0.0, 0.0);
            Eigen::Vector4d gm(0.0, 0.0, r.mu, r.mu * L);
            const Eigen::Vector4d gt = gl - gm;
            est.se_lambda = std::sqrt(std::max(0.0, gl.dot(fit.covariance * gl)));
            est.se_mu = std::sqrt(std::max(0.0, gm.dot(fit.covariance * gm)));
            est.se_theta = std::sqrt(std::max(0.0, gt.dot(fit.covariance * gt)));
        }
        fit.per_dose.push_back(est);
    }
    return fit;
}

} // namespace bdp
