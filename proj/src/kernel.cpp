#include "bdp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bdp {

namespace {

constexpr double kEqualSwitch = 1e-12;

// Mean rate used by the limit formulas; identical to lambda when the rates
// are exactly equal.
inline long double mean_rate(const Rates& r) {
    return 0.5L * ((long double)r.lambda + (long double)r.mu);
}

inline void require_positive(double t, const Rates& r) {
    if (!(t > 0.0)) throw domain_error("t must be strictly positive");
    if (!(r.lambda > 0.0)) throw domain_error("lambda must be strictly positive");
    if (!(r.mu > 0.0)) throw domain_error("mu must be strictly positive");
}

// expm1l overflows near theta*t = 11356; past this point the reciprocal
// x^{-1} = e^{-theta t} forms below take over.
inline bool huge_growth(double t, const Rates& r) {
    return ((long double)r.lambda - (long double)r.mu) * (long double)t > 11000.0L;
}

} // namespace

bool equal_rates_regime(double t, const Rates& rates) {
    const double diff = std::fabs(rates.lambda - rates.mu);
    return diff * t <= kEqualSwitch * (1.0 + (rates.lambda + rates.mu) * t);
}

namespace detail {

long double phi_ld(double t, const Rates& rates) {
    if (equal_rates_regime(t, rates)) {
        const long double r = mean_rate(rates);
        return (long double)t / (1.0L + r * (long double)t);
    }
    const long double theta = (long double)rates.lambda - (long double)rates.mu;
    if (huge_growth(t, rates)) {
        const long double r = expl(-theta * (long double)t);
        return (1.0L - r) / ((long double)rates.lambda - (long double)rates.mu * r);
    }
    const long double w = expm1l(theta * (long double)t);
    return w / ((long double)rates.lambda * w + theta);
}

long double log_phi_ld(double t, const Rates& rates) {
    if (equal_rates_regime(t, rates)) {
        const long double r = mean_rate(rates);
        return logl((long double)t) - log1pl(r * (long double)t);
    }
    const long double theta = (long double)rates.lambda - (long double)rates.mu;
    if (huge_growth(t, rates)) {
        const long double r = expl(-theta * (long double)t);
        return log1pl(-r) -
               logl((long double)rates.lambda - (long double)rates.mu * r);
    }
    const long double w = expm1l(theta * (long double)t);
    const long double den = (long double)rates.lambda * w + theta;
    // w and den always share their sign (the sign of theta).
    return logl(fabsl(w)) - logl(fabsl(den));
}

long double gamma_ld(double t, const Rates& rates) {
    if (equal_rates_regime(t, rates)) {
        const long double lt = mean_rate(rates) * (long double)t;
        return (1.0L - lt) / (1.0L + lt);
    }
    const long double theta = (long double)rates.lambda - (long double)rates.mu;
    if (huge_growth(t, rates)) {
        const long double r = expl(-theta * (long double)t);
        return ((long double)rates.lambda * r - (long double)rates.mu) /
               ((long double)rates.lambda - (long double)rates.mu * r);
    }
    const long double w = expm1l(theta * (long double)t);
    return (theta - (long double)rates.mu * w) /
           ((long double)rates.lambda * w + theta);
}

long double z_ld(double t, const Rates& rates) {
    long double z;
    if (equal_rates_regime(t, rates)) {
        const long double lt = mean_rate(rates) * (long double)t;
        z = expm1l(-2.0L * logl(lt));
    } else if (huge_growth(t, rates)) {
        const long double lam = rates.lambda;
        const long double mu = rates.mu;
        const long double theta = lam - mu;
        const long double r = expl(-theta * (long double)t);
        const long double s = lam / mu + mu / lam;
        z = -(1.0L - s * r + r * r) / ((1.0L - r) * (1.0L - r));
    } else {
        const long double lam = rates.lambda;
        const long double mu = rates.mu;
        const long double theta = lam - mu;
        const long double w = expm1l(theta * (long double)t);
        const long double num = theta - mu * w;
        const long double den = lam * w + theta;
        z = (num / (lam * mu)) * (den / (w * w));
    }
    // By construction z > -1 for finite positive inputs; in the asymptotic
    // regime the gap can fall below machine epsilon, so clamp.
    const long double floor = -1.0L + 0x1p-62L;
    return std::max(z, floor);
}

} // namespace detail

double phi(double t, const Rates& rates) {
    validate(rates);
    validate_time(t);
    return (double)detail::phi_ld(t, rates);
}

double gamma_coef(double t, const Rates& rates) {
    validate(rates);
    validate_time(t);
    return (double)detail::gamma_ld(t, rates);
}

double xi_threshold(const Rates& rates) {
    validate(rates);
    if (!(rates.lambda > 0.0) || !(rates.mu > 0.0))
        throw domain_error("xi requires both rates strictly positive");
    const long double lam = rates.lambda;
    const long double mu = rates.mu;
    if (std::fabs(rates.lambda - rates.mu) <=
        kEqualSwitch * (rates.lambda + rates.mu)) {
        return (double)(1.0L / mean_rate(rates));
    }
    const long double theta = lam - mu;
    return (double)(log1pl(theta / mu) / theta);
}

double z_arg(double t, const Rates& rates) {
    validate(rates);
    validate_time(t);
    require_positive(t, rates);
    const double z = (double)detail::z_ld(t, rates);
    return std::max(z, std::nextafter(-1.0, 0.0));
}

double log_binomial(std::int64_t n, std::int64_t r) {
    if (n < 0 || r < 0 || r > n)
        throw domain_error("log_binomial requires 0 <= r <= n");
    r = std::min(r, n - r);
    if (r == 0) return 0.0;
    if (r <= 8000) {
        // Each factor (n-r+k)/k >= 1, so the running product is monotone and
        // bounded by binom(16000, 8000), well inside long-double range.
        long double c = 1.0L;
        for (std::int64_t k = 1; k <= r; ++k)
            c *= (long double)(n - r + k) / (long double)k;
        return (double)logl(c);
    }
    return std::lgamma((double)n + 1.0) - std::lgamma((double)r + 1.0) -
           std::lgamma((double)(n - r) + 1.0);
}

double log_omega(std::int64_t i, std::int64_t j, double t, const Rates& rates) {
    if (i < 1 || j < 1) throw domain_error("log_omega requires i, j >= 1");
    validate(rates);
    validate_time(t);
    require_positive(t, rates);
    const long double lp = detail::log_phi_ld(t, rates);
    const long double la = logl((long double)rates.mu) + lp;
    const long double lb = logl((long double)rates.lambda) + lp;
    return (double)((long double)log_binomial(i + j - 1, i - 1) +
                    (long double)i * la + (long double)j * lb);
}

KernelValues kernel_values(double t, const Rates& rates) {
    validate(rates);
    validate_time(t);
    KernelValues kv{};
    const long double p = detail::phi_ld(t, rates);
    kv.phi = (double)p;
    kv.alpha = (double)((long double)rates.mu * p);
    kv.beta = (double)((long double)rates.lambda * p);
    kv.gamma = (double)detail::gamma_ld(t, rates);
    kv.has_z = t > 0.0 && rates.lambda > 0.0 && rates.mu > 0.0;
    kv.z = kv.has_z ? (double)detail::z_ld(t, rates)
                    : std::numeric_limits<double>::quiet_NaN();
    return kv;
}

} // namespace bdp
