#include "bdp/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "bdp/kernel.hpp"

namespace bdp {

namespace {

namespace mp = boost::multiprecision;
using big_int = mp::mpz_int;
using big_rat = mp::mpq_rational;
using big_float = mp::number<mp::mpfr_float_backend<0>>;

// Scoped working precision for the variable-precision mpfr type.
class PrecisionGuard {
  public:
    explicit PrecisionGuard(int bits)
        : saved_(big_float::default_precision()) {
        big_float::default_precision(
            (unsigned)std::ceil((double)bits * 0.30103) + 4);
    }
    ~PrecisionGuard() { big_float::default_precision(saved_); }

  private:
    unsigned saved_;
};

big_int binom_exact(std::int64_t n, std::int64_t r) {
    if (r == 0) return 1; // empty product, any n
    if (r < 0 || n < 0 || r > n) return 0;
    r = std::min(r, n - r);
    big_int c = 1;
    for (std::int64_t k = 1; k <= r; ++k) {
        c *= n - r + k;
        c /= k;
    }
    return c;
}

void require_interior(const TransitionQuery& q, const Rates& rates) {
    validate(q);
    validate(rates);
    if (q.i < 1 || q.j < 1 || !(q.t > 0.0) || !(rates.lambda > 0.0) ||
        !(rates.mu > 0.0))
        throw domain_error(
            "reference evaluation requires the interior domain: i, j >= 1 and "
            "t, lambda, mu > 0");
}

// The naive series at the working precision, before taking logs.
big_float naive_sum_mp(const TransitionQuery& q, const Rates& rates) {
    const std::int64_t i = q.i;
    const std::int64_t j = q.j;
    const std::int64_t m = std::min(i, j);

    big_float alpha, beta, gamma;
    if (rates.lambda == rates.mu) {
        const big_float lt = big_float(rates.lambda) * big_float(q.t);
        alpha = beta = lt / (1 + lt);
        gamma = (1 - lt) / (1 + lt);
    } else {
        const big_float lam(rates.lambda), mu(rates.mu), t(q.t);
        const big_float x = exp((lam - mu) * t);
        const big_float phi = (x - 1) / (lam * x - mu);
        alpha = mu * phi;
        beta = lam * phi;
        gamma = 1 - alpha - beta;
    }

    big_float sum = 0;
    for (std::int64_t h = 0; h <= m; ++h) {
        big_float term(binom_exact(i, h) * binom_exact(i + j - h - 1, i - 1));
        term *= pow(alpha, (unsigned)(i - h));
        term *= pow(beta, (unsigned)(j - h));
        if (h > 0) term *= pow(gamma, (unsigned)h);
        sum += term;
    }
    return sum;
}

} // namespace

void validate(const PrecisionConfig& cfg) {
    if (cfg.working_bits < 128)
        throw domain_error("working_bits must be at least 128");
    if (cfg.truncation < 1) throw domain_error("truncation must be >= 1");
}

double hyp2f1_reference(const HyperArgs& args) {
    validate(args);
    const std::int64_t m = std::min(args.a, args.b);
    big_rat z(args.z); // exact binary value of the double
    big_rat sum = 0;
    big_rat zpow = 1;
    for (std::int64_t h = 0; h <= m; ++h) {
        if (h > 0) zpow *= z;
        sum += big_rat(binom_exact(args.a, h) * binom_exact(args.b, h),
                       binom_exact(args.a + args.b - args.k, h)) *
               zpow;
    }
    PrecisionGuard guard(256);
    const big_float v =
        big_float(numerator(sum)) / big_float(denominator(sum));
    return v.convert_to<double>();
}

double log_prob_reference(const TransitionQuery& q, const Rates& rates,
                          const PrecisionConfig& cfg) {
    require_interior(q, rates);
    validate(cfg);
    PrecisionGuard guard(cfg.working_bits);
    return log(naive_sum_mp(q, rates)).convert_to<double>();
}

double reference_precision_gap(const TransitionQuery& q, const Rates& rates,
                               int bits_lo, int bits_hi) {
    require_interior(q, rates);
    if (bits_lo < 128 || bits_hi < bits_lo)
        throw domain_error("need 128 <= bits_lo <= bits_hi");
    big_float lo_val;
    {
        PrecisionGuard guard(bits_lo);
        lo_val = log(naive_sum_mp(q, rates));
    }
    PrecisionGuard guard(bits_hi);
    const big_float hi_val = log(naive_sum_mp(q, rates));
    return abs(1 - big_float(lo_val) / hi_val).convert_to<double>();
}

double naive_log_prob_double(const TransitionQuery& q, const Rates& rates) {
    require_interior(q, rates);
    const std::int64_t i = q.i;
    const std::int64_t j = q.j;
    const std::int64_t m = std::min(i, j);

    double alpha, beta, gamma;
    if (rates.lambda == rates.mu) {
        const double lt = rates.lambda * q.t;
        alpha = beta = lt / (1.0 + lt);
        gamma = (1.0 - lt) / (1.0 + lt);
    } else {
        const double x = std::exp((rates.lambda - rates.mu) * q.t);
        const double phi = (x - 1.0) / (rates.lambda * x - rates.mu);
        alpha = rates.mu * phi;
        beta = rates.lambda * phi;
        gamma = 1.0 - alpha - beta;
    }

    // Plain recursive summation; only the binomial coefficients go through
    // log space.
    double sum = 0.0;
    for (std::int64_t h = 0; h <= m; ++h) {
        const double lb =
            log_binomial(i, h) + log_binomial(i + j - h - 1, i - 1);
        double term = std::exp(lb) * std::pow(alpha, (double)(i - h)) *
                      std::pow(beta, (double)(j - h));
        if (h > 0) term *= std::pow(gamma, (double)h);
        sum += term;
    }
    return std::log(sum);
}

std::vector<ScanPoint> relative_error_scan(const ScanGrid& grid,
                                           ScanMethod method,
                                           const PrecisionConfig& cfg) {
    if (grid.lambdas.empty() || grid.mus.empty())
        throw domain_error("scan grid must contain at least one point");
    std::vector<ScanPoint> out;
    out.reserve(grid.lambdas.size() * grid.mus.size());
    const TransitionQuery base{grid.i, grid.j, grid.t};
    for (double lam : grid.lambdas) {
        for (double mu : grid.mus) {
            const Rates rates{lam, mu};
            const double ref = log_prob_reference(base, rates, cfg);
            const double val = method == ScanMethod::ttrr
                                   ? log_transition_prob(base, rates)
                                   : naive_log_prob_double(base, rates);
            out.push_back(
                {lam, mu, ref, val, std::fabs(1.0 - val / ref)});
        }
    }
    return out;
}

} // namespace bdp
