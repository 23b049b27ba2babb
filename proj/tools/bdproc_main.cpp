#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bdp/csv.hpp"
#include "bdp/glm.hpp"
#include "bdp/inference.hpp"
#include "bdp/mc.hpp"
#include "bdp/oracle.hpp"
#include "bdp/simulate.hpp"
#include "bdp/transition.hpp"

namespace {

using bdp::format_double;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNoConverge = 3;

std::vector<double> parse_time_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    if (out.empty()) throw bdp::domain_error("empty time list");
    return out;
}

std::vector<double> linspace_steps(double lo, double hi, int points) {
    if (points < 1) throw bdp::domain_error("grid needs at least one point");
    std::vector<double> v(points);
    if (points == 1) {
        v[0] = lo;
        return v;
    }
    for (int k = 0; k < points; ++k)
        v[k] = lo + (hi - lo) * (double)k / (double)(points - 1);
    return v;
}

void print_fit_report(const bdp::FitResult& fit) {
    std::cout << "lambda_hat=" << format_double(fit.rates.lambda)
              << " se=" << format_double(fit.se_lambda) << "\n"
              << "mu_hat=" << format_double(fit.rates.mu)
              << " se=" << format_double(fit.se_mu) << "\n"
              << "theta_hat=" << format_double(fit.theta)
              << " se=" << format_double(fit.se_theta) << "\n"
              << "loglik=" << format_double(fit.loglik) << "\n"
              << "converged=" << (fit.converged ? "true" : "false") << "\n"
              << "iterations=" << fit.iterations << "\n";
}

int cmd_prob(std::int64_t i, std::int64_t j, double t, double lambda, double mu,
             bool log_output) {
    const bdp::TransitionQuery q{i, j, t};
    const bdp::Rates rates{lambda, mu};
    const double v = log_output ? bdp::log_transition_prob(q, rates)
                                : bdp::transition_prob(q, rates);
    std::cout << format_double(v) << "\n";
    return kExitOk;
}

struct SimulateArgs {
    std::int64_t i0 = 1;
    double tend = 1.0;
    double lambda = 0.0;
    double mu = 0.0;
    std::uint64_t seed = 0;
    std::string sample;
    bool events = false;
    bool stats = false;
};

int cmd_simulate(const SimulateArgs& a) {
    if (!a.events && !a.stats && a.sample.empty())
        throw bdp::domain_error(
            "choose an output: --sample <times>, --events, or --stats");
    const bdp::EventHistory h =
        bdp::simulate_history(a.i0, a.tend, {a.lambda, a.mu}, a.seed);
    if (!a.sample.empty()) {
        const std::vector<double> times = parse_time_list(a.sample);
        bdp::ObservationSet set;
        set.series.push_back(bdp::sample_at_times(h, times));
        bdp::write_series_csv(std::cout, set);
    }
    if (a.events) bdp::write_event_csv(std::cout, h);
    if (a.stats) {
        const bdp::SufficientStats st = bdp::sufficient_stats(h);
        std::cout << "births=" << st.births << "\n"
                  << "deaths=" << st.deaths << "\n"
                  << "exposure=" << format_double(st.exposure) << "\n";
    }
    return kExitOk;
}

struct FitArgs {
    std::string file;
    bool continuous = false;
    std::int64_t i0 = -1;
    double tend = -1.0;
    bdp::FitOptions opts;
};

int cmd_fit(const FitArgs& a) {
    std::ifstream in(a.file);
    if (!in) throw bdp::domain_error("cannot open '" + a.file + "'");
    if (a.continuous) {
        if (a.i0 < 0 || !(a.tend > 0.0))
            throw bdp::domain_error(
                "--continuous needs --i0 and --tend for the event file");
        bdp::EventHistory h;
        h.initial = a.i0;
        h.horizon = a.tend;
        h.events = bdp::read_event_csv(in);
        const bdp::SufficientStats st = bdp::sufficient_stats(h);
        const bdp::Rates mle = bdp::mle_continuous(st);
        const double root_b = std::sqrt((double)st.births);
        const double root_d = std::sqrt((double)st.deaths);
        std::cout << "lambda_hat=" << format_double(mle.lambda)
                  << " se=" << format_double(root_b / st.exposure) << "\n"
                  << "mu_hat=" << format_double(mle.mu)
                  << " se=" << format_double(root_d / st.exposure) << "\n"
                  << "theta_hat=" << format_double(mle.lambda - mle.mu)
                  << " se="
                  << format_double(
                         std::sqrt((double)(st.births + st.deaths)) / st.exposure)
                  << "\n"
                  << "loglik=" << format_double(bdp::loglik_continuous(mle, st))
                  << "\n"
                  << "converged=true\n"
                  << "iterations=0\n";
        return kExitOk;
    }
    const bdp::ObservationSet data = bdp::read_series_csv(in);
    const bdp::FitResult fit = bdp::fit_mle(data, a.opts);
    print_fit_report(fit);
    return fit.converged ? kExitOk : kExitNoConverge;
}

struct GlmArgs {
    std::string file;
    bdp::GlmOptions opts;
};

int cmd_fit_glm(const GlmArgs& a) {
    std::ifstream in(a.file);
    if (!in) throw bdp::domain_error("cannot open '" + a.file + "'");
    const std::vector<bdp::DoseRecord> records = bdp::read_dose_csv(in);
    const bdp::GlmFit fit = bdp::fit_glm(records, a.opts);
    std::cout << "alpha_lambda=" << format_double(fit.alpha_lambda)
              << " se=" << format_double(std::sqrt(std::max(0.0, fit.covariance(0, 0))))
              << "\n"
              << "beta_lambda=" << format_double(fit.beta_lambda)
              << " se=" << format_double(std::sqrt(std::max(0.0, fit.covariance(1, 1))))
              << "\n"
              << "alpha_mu=" << format_double(fit.alpha_mu)
              << " se=" << format_double(std::sqrt(std::max(0.0, fit.covariance(2, 2))))
              << "\n"
              << "beta_mu=" << format_double(fit.beta_mu)
              << " se=" << format_double(std::sqrt(std::max(0.0, fit.covariance(3, 3))))
              << "\n"
              << "loglik=" << format_double(fit.loglik) << "\n"
              << "converged=" << (fit.converged ? "true" : "false") << "\n"
              << "iterations=" << fit.iterations << "\n"
              << "dose,lambda,se_lambda,mu,se_mu,theta,se_theta\n";
    for (const bdp::DoseEstimate& d : fit.per_dose)
        std::cout << format_double(d.dose) << ',' << format_double(d.lambda)
                  << ',' << format_double(d.se_lambda) << ','
                  << format_double(d.mu) << ',' << format_double(d.se_mu) << ','
                  << format_double(d.theta) << ',' << format_double(d.se_theta)
                  << "\n";
    return fit.converged ? kExitOk : kExitNoConverge;
}

void print_summary_fields(const bdp::EstimatorSummary& s) {
    std::cout << ',' << format_double(s.truth) << ',' << format_double(s.bias)
              << ',' << format_double(s.rmse) << ','
              << format_double(s.mc_se_bias) << ','
              << format_double(s.mc_se_rmse);
}

int cmd_mc(const bdp::StudyConfig& cfg) {
    const bdp::McSummary sum = bdp::run_study(cfg);
    std::cout << "n0,S,replicates,n_sims,n_used,n_discarded,n_failed"
              << ",lambda_truth,lambda_bias,lambda_rmse,lambda_se_bias,lambda_se_rmse"
              << ",mu_truth,mu_bias,mu_rmse,mu_se_bias,mu_se_rmse"
              << ",theta_truth,theta_bias,theta_rmse,theta_se_bias,theta_se_rmse\n";
    std::cout << cfg.n0 << ',' << cfg.s_points << ',' << cfg.replicates << ','
              << sum.n_sims << ',' << sum.n_used << ',' << sum.n_discarded << ','
              << sum.n_failed;
    print_summary_fields(sum.lambda);
    print_summary_fields(sum.mu);
    print_summary_fields(sum.theta);
    std::cout << "\n";
    return kExitOk;
}

struct ScanArgs {
    int figure = 0;
    std::int64_t i = 25;
    std::int64_t j = 35;
    double t = 2.0;
    double lambda_min = 1.0, lambda_max = 1.0;
    int lambda_points = 1;
    double mu_min = 0.005, mu_max = 2.5;
    int mu_points = 500;
    std::string method = "ttrr";
    int bits = 256;
};

int cmd_error_scan(ScanArgs a) {
    bdp::ScanGrid grid;
    bdp::ScanMethod method =
        a.method == "naive" ? bdp::ScanMethod::naive : bdp::ScanMethod::ttrr;
    if (a.figure == 3 || a.figure == 1) {
        grid.i = 25;
        grid.j = 35;
        grid.t = 2.0;
        grid.lambdas = {1.0};
        grid.mus.resize(500);
        for (int k = 1; k <= 500; ++k) grid.mus[k - 1] = 2.5 * k / 500.0;
        if (a.figure == 1) method = bdp::ScanMethod::naive;
    } else if (a.figure == 4) {
        grid.i = 200;
        grid.j = 100;
        grid.t = 1.0;
        grid.lambdas = linspace_steps(0.1, 2.0, 39);
        grid.mus = grid.lambdas;
    } else if (a.figure != 0) {
        throw bdp::domain_error("--figure must be 1, 3, or 4");
    } else {
        grid.i = a.i;
        grid.j = a.j;
        grid.t = a.t;
        grid.lambdas = linspace_steps(a.lambda_min, a.lambda_max, a.lambda_points);
        grid.mus = linspace_steps(a.mu_min, a.mu_max, a.mu_points);
    }
    bdp::PrecisionConfig cfg;
    cfg.working_bits = a.bits;
    const std::vector<bdp::ScanPoint> points =
        bdp::relative_error_scan(grid, method, cfg);
    const bool single_lambda = grid.lambdas.size() == 1;
    std::cout << (single_lambda ? "mu" : "lambda,mu")
              << ",log_p_ref,log_p_method,rel_err\n";
    for (const bdp::ScanPoint& p : points) {
        if (!single_lambda) std::cout << format_double(p.lambda) << ',';
        std::cout << format_double(p.mu) << ',' << format_double(p.log_ref)
                  << ',' << format_double(p.log_method) << ','
                  << format_double(p.rel_err) << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerically stable linear birth-death process toolkit"};
    app.require_subcommand(1);

    // prob
    std::int64_t p_i = 0, p_j = 0;
    double p_t = 0, p_lambda = 0, p_mu = 0;
    bool p_log = false;
    CLI::App* prob = app.add_subcommand("prob", "Transition probability p(j | i, t)");
    prob->add_option("--i", p_i, "initial size")->required();
    prob->add_option("--j", p_j, "final size")->required();
    prob->add_option("--t", p_t, "elapsed time")->required();
    prob->add_option("--lambda", p_lambda, "birth rate")->required();
    prob->add_option("--mu", p_mu, "death rate")->required();
    prob->add_flag("--log", p_log, "print the log probability");

    // simulate
    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Exact trajectory simulation");
    simulate->add_option("--i0", sim.i0, "initial size")->required();
    simulate->add_option("--tend", sim.tend, "time horizon")->required();
    simulate->add_option("--lambda", sim.lambda, "birth rate")->required();
    simulate->add_option("--mu", sim.mu, "death rate")->required();
    simulate->add_option("--seed", sim.seed, "RNG seed")->envname("BDPROC_SEED");
    simulate->add_option("--sample", sim.sample,
                         "comma-separated sampling times (first must be 0)");
    simulate->add_flag("--events", sim.events, "emit the event list CSV");
    simulate->add_flag("--stats", sim.stats, "emit sufficient statistics");

    // fit
    FitArgs fit;
    CLI::App* fitc = app.add_subcommand("fit", "Maximum likelihood fit of a series file");
    fitc->add_option("file", fit.file, "series CSV (or event CSV with --continuous)")
        ->required();
    fitc->add_flag("--continuous", fit.continuous,
                   "closed-form fit from a continuously observed event file");
    fitc->add_option("--i0", fit.i0, "initial size of the event file");
    fitc->add_option("--tend", fit.tend, "horizon of the event file");
    fitc->add_option("--tol", fit.opts.tol, "gradient tolerance");
    fitc->add_option("--max-iter", fit.opts.max_iter, "iteration cap");
    fitc->add_option("--restarts", fit.opts.n_restarts, "jittered restarts");
    fitc->add_flag("--condition", fit.opts.condition_on_survival,
                   "drop series extinct at their first sample");

    // fit-glm
    GlmArgs glm;
    bool no_slope = false;
    CLI::App* glmc = app.add_subcommand("fit-glm", "Dose-response fit of a dose file");
    glmc->add_option("file", glm.file, "dose CSV")->required();
    glmc->add_flag("--no-slope", no_slope, "intercept-only model");
    glmc->add_option("--tol", glm.opts.tol, "gradient tolerance");
    glmc->add_option("--max-iter", glm.opts.max_iter, "iteration cap");
    glmc->add_option("--restarts", glm.opts.n_restarts, "jittered restarts");

    // mc
    bdp::StudyConfig mc;
    bool no_condition = false;
    CLI::App* mcc = app.add_subcommand("mc", "Monte Carlo bias/RMSE study");
    mcc->add_option("--n0", mc.n0, "initial size")->required();
    mcc->add_option("--s", mc.s_points, "sampling intervals")->required();
    mcc->add_option("--horizon", mc.horizon, "total observation time");
    mcc->add_option("--lambda", mc.rates.lambda, "true birth rate")->required();
    mcc->add_option("--mu", mc.rates.mu, "true death rate")->required();
    mcc->add_option("--replicates", mc.replicates, "technical replicates per fit");
    mcc->add_option("--sims", mc.n_sims, "number of simulations");
    mcc->add_option("--seed", mc.seed, "study seed")->envname("BDPROC_SEED");
    mcc->add_option("--threads", mc.threads, "worker threads (0 = hardware)");
    mcc->add_flag("--no-condition", no_condition,
                  "keep simulations that are extinct at the first sample");
    mcc->add_option("--tol", mc.fit.tol, "fit gradient tolerance");
    mcc->add_option("--max-iter", mc.fit.max_iter, "fit iteration cap");
    mcc->add_option("--restarts", mc.fit.n_restarts, "fit restarts");

    // error-scan
    ScanArgs scan;
    CLI::App* scanc =
        app.add_subcommand("error-scan", "Relative error of a method vs the oracle");
    scanc->add_option("--figure", scan.figure, "named preset grid (1, 3, or 4)");
    scanc->add_option("--i", scan.i, "initial size");
    scanc->add_option("--j", scan.j, "final size");
    scanc->add_option("--t", scan.t, "elapsed time");
    scanc->add_option("--lambda-min", scan.lambda_min, "lambda grid start");
    scanc->add_option("--lambda-max", scan.lambda_max, "lambda grid end");
    scanc->add_option("--lambda-points", scan.lambda_points, "lambda grid size");
    scanc->add_option("--mu-min", scan.mu_min, "mu grid start");
    scanc->add_option("--mu-max", scan.mu_max, "mu grid end");
    scanc->add_option("--mu-points", scan.mu_points, "mu grid size");
    scanc->add_option("--method", scan.method, "ttrr or naive")
        ->check(CLI::IsMember({"ttrr", "naive"}));
    scanc->add_option("--bits", scan.bits, "oracle working precision");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (prob->parsed()) return cmd_prob(p_i, p_j, p_t, p_lambda, p_mu, p_log);
        if (simulate->parsed()) return cmd_simulate(sim);
        if (fitc->parsed()) return cmd_fit(fit);
        if (glmc->parsed()) {
            glm.opts.fit_slopes = !no_slope;
            return cmd_fit_glm(glm);
        }
        if (mcc->parsed()) {
            mc.condition_on_survival = !no_condition;
            return cmd_mc(mc);
        }
        if (scanc->parsed()) return cmd_error_scan(scan);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
