#include "bdp/mc.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "bdp/simulate.hpp"

namespace bdp {

namespace {

struct SimOutcome {
    bool discarded = false;
    bool failed = false;
    double lambda = 0.0;
    double mu = 0.0;
};

EstimatorSummary summarize(const std::vector<double>& est, double truth) {
    EstimatorSummary s;
    s.truth = truth;
    const std::size_t n = est.size();
    long double mean = 0.0L, msq = 0.0L;
    for (double e : est) {
        mean += (long double)e;
        const long double d = (long double)e - (long double)truth;
        msq += d * d;
    }
    mean /= (long double)n;
    msq /= (long double)n;
    s.bias = (double)(mean - (long double)truth);
    s.rmse = (double)sqrtl(msq);

    long double var_e = 0.0L, var_sq = 0.0L;
    for (double e : est) {
        const long double de = (long double)e - mean;
        var_e += de * de;
        const long double d = (long double)e - (long double)truth;
        var_sq += (d * d - msq) * (d * d - msq);
    }
    if (n > 1) {
        var_e /= (long double)(n - 1);
        var_sq /= (long double)(n - 1);
    }
    s.mc_se_bias = (double)sqrtl(var_e / (long double)n);
    s.mc_se_rmse =
        s.rmse > 0.0
            ? (double)(sqrtl(var_sq / (long double)n) / (2.0L * (long double)s.rmse))
            : 0.0;
    return s;
}

} // namespace

McSummary run_study(const StudyConfig& cfg) {
    validate(cfg.rates);
    if (cfg.n0 < 1) throw domain_error("n0 must be >= 1");
    if (cfg.s_points < 1) throw domain_error("s_points must be >= 1");
    if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon))
        throw domain_error("horizon must be positive and finite");
    if (cfg.replicates < 1) throw domain_error("replicates must be >= 1");
    if (cfg.n_sims < 1) throw domain_error("n_sims must be >= 1");
    if (cfg.rates.lambda == 0.0 && cfg.rates.mu == 0.0)
        throw domain_error("degenerate truth: lambda and mu cannot both be 0");

    std::vector<double> times(cfg.s_points + 1);
    for (int s = 0; s <= cfg.s_points; ++s)
        times[s] = cfg.horizon * (double)s / (double)cfg.s_points;
    times.back() = cfg.horizon;

    std::vector<SimOutcome> outcomes(cfg.n_sims);
    std::atomic<int> next{0};
    const auto worker = [&]() {
        while (true) {
            const int s = next.fetch_add(1);
            if (s >= cfg.n_sims) return;
            SimOutcome& out = outcomes[s];
            try {
                ObservationSet set;
                bool all_alive = true;
                for (int r = 0; r < cfg.replicates; ++r) {
                    const std::uint64_t child = child_seed(
                        cfg.seed, (std::uint64_t)s * (std::uint64_t)cfg.replicates +
                                      (std::uint64_t)r);
                    const EventHistory h =
                        simulate_history(cfg.n0, cfg.horizon, cfg.rates, child);
                    ObservedSeries series = sample_at_times(h, times);
                    all_alive = all_alive && !series.extinct_at_first_sample();
                    set.series.push_back(std::move(series));
                }
                // Every replicate population must survive its first sampling
                // time; a simulation with an immediately extinct population
                // is discarded whole.
                if (cfg.condition_on_survival && !all_alive) {
                    out.discarded = true;
                    continue;
                }
                const FitResult fit = fit_mle(set, cfg.fit);
                if (!fit.converged) {
                    out.failed = true;
                    continue;
                }
                out.lambda = fit.rates.lambda;
                out.mu = fit.rates.mu;
            } catch (const std::exception&) {
                out.failed = true;
            }
        }
    };

    int nthreads = cfg.threads > 0 ? cfg.threads
                                   : (int)std::thread::hardware_concurrency();
    if (nthreads < 1) nthreads = 1;
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nthreads; ++w) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }

    // Fixed-order reduction over the simulation index.
    McSummary sum;
    sum.n_sims = cfg.n_sims;
    std::vector<double> lam, mu, theta;
    for (const SimOutcome& out : outcomes) {
        if (out.discarded) {
            ++sum.n_discarded;
            continue;
        }
        if (out.failed) {
            ++sum.n_failed;
            continue;
        }
        lam.push_back(out.lambda);
        mu.push_back(out.mu);
        theta.push_back(out.lambda - out.mu);
    }
    sum.n_used = (std::int64_t)lam.size();
    if (sum.n_used == 0)
        throw undefined_error("every simulation was discarded or failed");

    sum.lambda = summarize(lam, cfg.rates.lambda);
    sum.mu = summarize(mu, cfg.rates.mu);
    sum.theta = summarize(theta, cfg.rates.lambda - cfg.rates.mu);
    return sum;
}

} // namespace bdp
