#include "bdp/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "bdp/transition.hpp"
#include "optimize.hpp"

namespace bdp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Transition {
    std::int64_t from;
    std::int64_t to;
    double tau;
};

// Consecutive pairs of every series, dropping the 0 -> 0 pairs that carry
// probability one under any rates.
std::vector<Transition> flatten(const ObservationSet& data) {
    std::vector<Transition> tr;
    for (const ObservedSeries& s : data.series) {
        for (std::size_t p = 1; p < s.size(); ++p) {
            const std::int64_t from = s.counts()[p - 1];
            if (from == 0) continue;
            tr.push_back({from, s.counts()[p], s.times()[p] - s.times()[p - 1]});
        }
    }
    return tr;
}

double loglik_transitions(const std::vector<Transition>& tr, const Rates& rates) {
    long double acc = 0.0L;
    for (const Transition& x : tr) {
        const double lp = log_transition_prob({x.from, x.to, x.tau}, rates);
        if (lp == kNegInf) return kNegInf;
        acc += (long double)lp;
    }
    return (double)acc;
}

void derivs_transitions(const std::vector<Transition>& tr, const Rates& rates,
                        GradLogP& g, HessLogP& h) {
    long double dl = 0, dm = 0, dll = 0, dlm = 0, dmm = 0;
    for (const Transition& x : tr) {
        const TransitionQuery q{x.from, x.to, x.tau};
        const GradLogP gg = log_prob_grad(q, rates);
        const HessLogP hh = log_prob_hessian(q, rates);
        dl += gg.d_lambda;
        dm += gg.d_mu;
        dll += hh.d_ll;
        dlm += hh.d_lm;
        dmm += hh.d_mm;
    }
    g = {(double)dl, (double)dm};
    h = {(double)dll, (double)dlm, (double)dmm};
}

// Growth-rate start value: the closed equidistant form when it applies,
// otherwise a pooled log-linear least-squares slope.
double initial_theta(const ObservationSet& data) {
    double tau_min = std::numeric_limits<double>::infinity();
    double tau_max = 0.0;
    long double num = 0.0L, den = 0.0L;
    for (const ObservedSeries& s : data.series) {
        for (std::size_t p = 1; p < s.size(); ++p) {
            const double tau = s.times()[p] - s.times()[p - 1];
            tau_min = std::min(tau_min, tau);
            tau_max = std::max(tau_max, tau);
            num += (long double)s.counts()[p];
            den += (long double)s.counts()[p - 1];
        }
    }
    if (tau_max - tau_min <= 1e-9 * tau_max && num > 0.0L && den > 0.0L)
        return (double)(logl(num / den) / (long double)(0.5 * (tau_min + tau_max)));

    // Pooled within-series regression of log counts on time.
    long double sxx = 0.0L, sxy = 0.0L;
    for (const ObservedSeries& s : data.series) {
        long double tbar = 0.0L, ybar = 0.0L;
        std::size_t n = 0;
        for (std::size_t p = 0; p < s.size(); ++p) {
            if (s.counts()[p] <= 0) continue;
            tbar += s.times()[p];
            ybar += logl((long double)s.counts()[p]);
            ++n;
        }
        if (n < 2) continue;
        tbar /= n;
        ybar /= n;
        for (std::size_t p = 0; p < s.size(); ++p) {
            if (s.counts()[p] <= 0) continue;
            const long double dt = (long double)s.times()[p] - tbar;
            sxx += dt * dt;
            sxy += dt * (logl((long double)s.counts()[p]) - ybar);
        }
    }
    return sxx > 0.0L ? (double)(sxy / sxx) : 0.0;
}

// Split theta0 into starting rates by matching the conditional variance of
// one step, n_{s-1} * (lambda + mu) * e^{theta tau} (e^{theta tau} - 1) / theta.
Rates initial_rates(const ObservationSet& data, double theta0) {
    long double rss = 0.0L, denom = 0.0L;
    for (const ObservedSeries& s : data.series) {
        for (std::size_t p = 1; p < s.size(); ++p) {
            const std::int64_t n_prev = s.counts()[p - 1];
            if (n_prev == 0) continue;
            const long double tau = s.times()[p] - s.times()[p - 1];
            const long double th = (long double)theta0 * tau;
            const long double growth = expl(th);
            const long double resid =
                (long double)s.counts()[p] - (long double)n_prev * growth;
            rss += resid * resid;
            const long double unit =
                fabsl(th) < 1e-8L ? tau : growth * expm1l(th) / (long double)theta0;
            denom += (long double)n_prev * unit;
        }
    }
    const double total =
        denom > 0.0L ? std::max(0.0, (double)(rss / denom)) : 0.0;
    Rates r;
    r.lambda = std::max((total + theta0) / 2.0, 1e-4);
    r.mu = std::max((total - theta0) / 2.0, 1e-4);
    return r;
}

} // namespace

double loglik(const Rates& rates, const ObservationSet& data) {
    validate(rates);
    validate(data);
    return loglik_transitions(flatten(data), rates);
}

GradLogP loglik_grad(const Rates& rates, const ObservationSet& data) {
    validate(rates);
    validate(data);
    GradLogP g;
    HessLogP h;
    derivs_transitions(flatten(data), rates, g, h);
    return g;
}

HessLogP loglik_hessian(const Rates& rates, const ObservationSet& data) {
    validate(rates);
    validate(data);
    GradLogP g;
    HessLogP h;
    derivs_transitions(flatten(data), rates, g, h);
    return h;
}

double loglik_continuous(const Rates& rates, const SufficientStats& stats) {
    validate(rates);
    validate(stats);
    const double lb = stats.births > 0
                          ? (double)stats.births * std::log(rates.lambda)
                          : 0.0;
    const double ld = stats.deaths > 0 ? (double)stats.deaths * std::log(rates.mu)
                                       : 0.0;
    return lb + ld - (rates.lambda + rates.mu) * stats.exposure;
}

Rates mle_continuous(const SufficientStats& stats) {
    validate(stats);
    if (!(stats.exposure > 0.0))
        throw domain_error("continuous MLE requires positive exposure");
    return {(double)stats.births / stats.exposure,
            (double)stats.deaths / stats.exposure};
}

double theta_hat_equidistant(const ObservedSeries& series) {
    const std::size_t S = series.size() - 1;
    double tau_min = std::numeric_limits<double>::infinity();
    double tau_max = 0.0;
    for (std::size_t p = 1; p <= S; ++p) {
        const double tau = series.times()[p] - series.times()[p - 1];
        tau_min = std::min(tau_min, tau);
        tau_max = std::max(tau_max, tau);
    }
    if (tau_max - tau_min > 1e-9 * tau_max)
        throw domain_error("sampling times are not equidistant");
    long double num = 0.0L, den = 0.0L;
    for (std::size_t p = 0; p <= S; ++p) {
        if (p >= 1) num += (long double)series.counts()[p];
        if (p < S) den += (long double)series.counts()[p];
    }
    if (!(num > 0.0L) || !(den > 0.0L))
        throw undefined_error(
            "growth-rate estimator undefined: a count sum is zero");
    const double tau = 0.5 * (tau_min + tau_max);
    return (double)(logl(num / den) / (long double)tau);
}

FitResult fit_mle(const ObservationSet& data_in, const FitOptions& opts) {
    validate(data_in);
    if (!(opts.tol > 0.0)) throw domain_error("tol must be positive");
    if (opts.max_iter < 1) throw domain_error("max_iter must be >= 1");
    if (opts.n_restarts < 1) throw domain_error("n_restarts must be >= 1");

    ObservationSet data;
    if (opts.condition_on_survival) {
        for (const ObservedSeries& s : data_in.series)
            if (!s.extinct_at_first_sample()) data.series.push_back(s);
        if (data.series.empty())
            throw undefined_error(
                "every series is extinct at its first sample; no informative "
                "data left");
    } else {
        data = data_in;
    }

    const std::vector<Transition> tr = flatten(data);
    if (tr.empty())
        throw undefined_error("no informative transitions in the data");

    const auto value_fn = [&tr](const Eigen::VectorXd& x) {
        const Rates r{std::exp(x[0]), std::exp(x[1])};
        try {
            return loglik_transitions(tr, r);
        } catch (const numeric_error&) {
            return kNegInf;
        }
    };
    const auto derivs_fn = [&tr](const Eigen::VectorXd& x, Eigen::VectorXd& g,
                                 Eigen::MatrixXd& h) {
        const Rates r{std::exp(x[0]), std::exp(x[1])};
        GradLogP gg;
        HessLogP hh;
        derivs_transitions(tr, r, gg, hh);
        const double gl = r.lambda * gg.d_lambda;
        const double gm = r.mu * gg.d_mu;
        g.resize(2);
        g << gl, gm;
        h.resize(2, 2);
        h(0, 0) = r.lambda * r.lambda * hh.d_ll + gl;
        h(1, 1) = r.mu * r.mu * hh.d_mm + gm;
        h(0, 1) = h(1, 0) = r.lambda * r.mu * hh.d_lm;
    };

    const double theta0 = initial_theta(data);
    const Rates start = initial_rates(data, theta0);
    Eigen::VectorXd x0(2);
    x0 << std::log(start.lambda), std::log(start.mu);

    detail::NewtonOptions nopts;
    nopts.tol = opts.tol;
    nopts.max_iter = opts.max_iter;

    detail::NewtonOutcome best;
    bool have = false;
    std::mt19937_64 jitter(0x5EEDF17ULL);
    std::normal_distribution<double> noise(0.0, 0.75);
    for (int r = 0; r < opts.n_restarts; ++r) {
        Eigen::VectorXd x = x0;
        if (r > 0) {
            x[0] += noise(jitter);
            x[1] += noise(jitter);
        }
        detail::NewtonOutcome out = detail::maximize_newton(value_fn, derivs_fn, x, nopts);
        const bool better =
            !have || (out.converged && !best.converged) ||
            (out.converged == best.converged && out.value > best.value);
        if (better) {
            best = out;
            have = true;
        }
    }

    FitResult res;
    res.rates = {std::exp(best.x[0]), std::exp(best.x[1])};
    res.theta = res.rates.lambda - res.rates.mu;
    res.loglik = best.value;
    res.converged = best.converged;
    res.iterations = best.iterations;
    res.at_boundary =
        res.rates.lambda < 1e-8 * (1.0 + res.rates.mu) ||
        res.rates.mu < 1e-8 * (1.0 + res.rates.lambda);

    GradLogP g_final;
    derivs_transitions(tr, res.rates, g_final, res.hessian);

    // Observed information in the original coordinates.
    Eigen::Matrix2d info;
    info << -res.hessian.d_ll, -res.hessian.d_lm, -res.hessian.d_lm,
        -res.hessian.d_mm;
    Eigen::LLT<Eigen::Matrix2d> llt(info);
    if (llt.info() == Eigen::Success) {
        const Eigen::Matrix2d cov = llt.solve(Eigen::Matrix2d::Identity());
        res.se_lambda = std::sqrt(std::max(0.0, cov(0, 0)));
        res.se_mu = std::sqrt(std::max(0.0, cov(1, 1)));
        res.se_theta =
            std::sqrt(std::max(0.0, cov(0, 0) + cov(1, 1) - 2.0 * cov(0, 1)));
    } else {
        res.se_lambda = res.se_mu = res.se_theta = kNaN;
    }
    return res;
}

} // namespace bdp
