#ifndef BDP_SRC_OPTIMIZE_HPP
#define BDP_SRC_OPTIMIZE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>

namespace bdp::detail {

// Safeguarded Newton ascent in unconstrained (log-scale) coordinates.
// Directions fall back to steepest ascent whenever the negated Hessian is
// not positive definite, every step passes an Armijo backtracking test, and
// coordinates are clamped from below so rates can approach but never reach
// zero.  The accepted objective sequence is non-decreasing.
struct NewtonOptions {
    double tol = 1e-8;
    int max_iter = 200;
    double floor = -300.0;
    double max_step = 8.0;
};

struct NewtonOutcome {
    Eigen::VectorXd x;
    double value = -std::numeric_limits<double>::infinity();
    bool converged = false;
    int iterations = 0;
};

template <typename F, typename D>
NewtonOutcome maximize_newton(const F& value_fn, const D& derivs_fn,
                              Eigen::VectorXd x0, const NewtonOptions& opts) {
    const int dim = (int)x0.size();
    NewtonOutcome out;
    out.x = x0.cwiseMax(opts.floor);
    out.value = value_fn(out.x);
    if (!std::isfinite(out.value)) return out;

    Eigen::VectorXd grad(dim);
    Eigen::MatrixXd hess(dim, dim);
    for (int it = 0; it < opts.max_iter; ++it) {
        out.iterations = it;
        derivs_fn(out.x, grad, hess);

        // Project out descent components pinned at the floor.
        Eigen::VectorXd g = grad;
        for (int c = 0; c < dim; ++c)
            if (out.x[c] <= opts.floor + 1e-12 && g[c] < 0.0) g[c] = 0.0;
        if (g.norm() <= opts.tol * (1.0 + std::fabs(out.value))) {
            out.converged = true;
            return out;
        }

        // Newton when the negated Hessian is positive definite; a ridged
        // (Levenberg-style) system when it is not; normalized gradient as
        // the last resort.  The ridge matters near the rate axes, where the
        // log-likelihood turns convex in one coordinate and plain gradient
        // steps zigzag in the other.
        Eigen::VectorXd dir;
        bool have_dir = false;
        const Eigen::MatrixXd a = -hess;
        const double diag_scale =
            std::max(a.diagonal().cwiseAbs().maxCoeff(), 1e-30);
        double ridge = 0.0;
        for (int attempt = 0; attempt < 64 && !have_dir; ++attempt) {
            Eigen::LLT<Eigen::MatrixXd> llt(
                a + ridge * Eigen::MatrixXd::Identity(dim, dim));
            if (llt.info() == Eigen::Success) {
                dir = llt.solve(grad);
                have_dir = dir.allFinite() && dir.dot(g) > 0.0;
            }
            ridge = ridge == 0.0 ? 1e-10 * diag_scale : ridge * 8.0;
            if (ridge > 1e8 * diag_scale) break;
        }
        if (!have_dir) dir = g / g.cwiseAbs().maxCoeff();
        const double dinf = dir.cwiseAbs().maxCoeff();
        if (dinf > opts.max_step) dir *= opts.max_step / dinf;

        const double slope = g.dot(dir);
        double step = 1.0;
        bool accepted = false;
        while (step >= 1e-16) {
            Eigen::VectorXd trial = (out.x + step * dir).cwiseMax(opts.floor);
            const double fv = value_fn(trial);
            if (std::isfinite(fv) && fv >= out.value + 1e-4 * step * slope) {
                out.x = trial;
                out.value = fv;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // No admissible step along an ascent direction: numerically
            // stationary.
            out.converged =
                g.norm() <= 1e3 * opts.tol * (1.0 + std::fabs(out.value));
            return out;
        }
    }
    out.iterations = opts.max_iter;
    derivs_fn(out.x, grad, hess);
    for (int c = 0; c < dim; ++c)
        if (out.x[c] <= opts.floor + 1e-12 && grad[c] < 0.0) grad[c] = 0.0;
    out.converged = grad.norm() <= opts.tol * (1.0 + std::fabs(out.value));
    return out;
}

} // namespace bdp::detail

#endif
