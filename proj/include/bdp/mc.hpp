#ifndef BDP_MC_HPP
#define BDP_MC_HPP

#include <cstdint>

#include "bdp/inference.hpp"
#include "bdp/rates.hpp"

namespace bdp {

// One Monte Carlo study cell: simulate `replicates` trajectories from n0,
// sample them at s_points equidistant times over the horizon, fit, and
// accumulate bias and RMSE of the rate estimators.
struct StudyConfig {
    std::int64_t n0 = 10;
    int s_points = 1;
    double horizon = 10.0;
    Rates rates;
    int replicates = 1;
    int n_sims = 10000;
    std::uint64_t seed = 0;
    // Discard simulations whose replicates are all extinct at the first
    // sampling time; the growth-rate estimator has no first moment without
    // this conditioning.
    bool condition_on_survival = true;
    int threads = 0; // 0 = hardware concurrency
    FitOptions fit;
};

struct EstimatorSummary {
    double truth = 0.0;
    double bias = 0.0;
    double rmse = 0.0;
    double mc_se_bias = 0.0; // Monte Carlo standard errors of the two
    double mc_se_rmse = 0.0; // summaries above
};

struct McSummary {
    EstimatorSummary lambda, mu, theta;
    std::int64_t n_sims = 0;
    std::int64_t n_used = 0;
    std::int64_t n_discarded = 0; // conditioning rule
    std::int64_t n_failed = 0;    // non-converged or errored fits, excluded
};

// Deterministic for a fixed config: replicate r of simulation s draws from
// child_seed(seed, s * replicates + r) and the reduction order is fixed, so
// the result does not depend on the worker count.
McSummary run_study(const StudyConfig& cfg);

} // namespace bdp

#endif
