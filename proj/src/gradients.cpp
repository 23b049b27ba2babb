#include "bdp/gradients.hpp"

#include <cmath>

#include "bdp/hypergeom.hpp"
#include "bdp/kernel.hpp"

namespace bdp {

namespace {

using ld = long double;

constexpr double kAxisSwitch = 1e-12;

// Ratios of shifted hypergeometric evaluations entering the derivative
// formulas:
//   u = F(-(i-1), -(j-1); -(i+j-2); -z) / F(-i, -j; -(i+j-1); -z)
//   v = F(-(i-2), -(j-2); -(i+j-3); -z) / F(-i, -j; -(i+j-1); -z)
// Formed from log magnitudes so huge indices cannot overflow.
struct FRatios {
    ld u = 0.0L;
    ld v_over_u = 0.0L; // zero when the v term is absent (min(i,j) < 2)
};

ld signed_ratio(const SignedLog& num, const SignedLog& den) {
    const ld mag = expl((ld)num.log_abs - (ld)den.log_abs);
    return (ld)(num.sign * den.sign) * mag;
}

// Narrowing a long-double z just above -1 can round to exactly -1.0.
double to_z_double(ld z) {
    return std::max((double)z, std::nextafter(-1.0, 0.0));
}

FRatios f_ratios(std::int64_t i, std::int64_t j, double z, bool want_v) {
    const SignedLog f0 = hyp2f1_ttrr_log({i, j, 1, z});
    if (f0.sign <= 0)
        throw numeric_error(
            "hypergeometric factor lost positivity; derivative degenerate");
    const SignedLog f1 = hyp2f1_ttrr_log({i - 1, j - 1, 0, z});
    FRatios r;
    r.u = signed_ratio(f1, f0);
    if (want_v && i >= 2 && j >= 2) {
        const SignedLog f2 = hyp2f1_ttrr_log({i - 2, j - 2, -1, z});
        r.v_over_u = signed_ratio(f2, f1);
    }
    return r;
}

struct Derivs {
    ld dl = 0, dm = 0, dll = 0, dlm = 0, dmm = 0;
};

// Unequal strictly positive rates: the general piecewise formulas built
// from the partials of log phi and z.
Derivs interior_unequal(std::int64_t i, std::int64_t j, double t,
                        const Rates& rates, bool want_hess) {
    const ld lam = rates.lambda;
    const ld mu = rates.mu;
    const ld T = t;
    const ld theta = lam - mu;
    const ld w = expm1l(theta * T);
    const ld x = 1.0L + w;
    const ld den = lam * w + theta; // = lambda x - mu

    const ld A = 1.0L - theta * T / w;
    const ld B = 1.0L - theta * T * x / w;

    const ld lp_l = -x / den * A;
    const ld lp_m = B / den;

    Derivs d;
    const ld ij = (ld)i * (ld)j;
    const ld n = (ld)(i + j);

    ld F_l = 0, F_m = 0, F_ll = 0, F_mm = 0, F_lm = 0;
    if (j >= 1) {
        const ld z = detail::z_ld(t, rates);
        const FRatios fr = f_ratios(i, j, to_z_double(z), want_hess);
        const ld cu = ij * fr.u / (ld)(i + j - 1);

        const ld C1 = theta * x / (lam * mu * w * w);
        const ld S = theta * T * (x + 1.0L) / w;
        const ld z_l = C1 * ((lam + mu) / lam - S);
        const ld z_m = -C1 * ((lam + mu) / mu - S);
        F_l = cu * z_l;
        F_m = cu * z_m;

        if (want_hess) {
            const ld C2 = x / (lam * mu * w * w);
            const ld Q = theta * T / w;
            const ld P = x * x + 4.0L * x + 1.0L;
            const ld z_ll =
                C2 * (2.0L * (mu / lam) * (mu / lam) -
                      Q * (2.0L * ((lam + mu) / lam) * (x + 1.0L) - Q * P));
            const ld z_mm =
                C2 * (2.0L * (lam / mu) * (lam / mu) -
                      Q * (2.0L * ((lam + mu) / mu) * (x + 1.0L) - Q * P));
            const ld z_lm =
                -C2 * ((lam * lam + mu * mu) / (lam * mu) -
                       Q * ((lam + mu) * (lam + mu) / (lam * mu) * (x + 1.0L) -
                            Q * P));
            ld E = -cu;
            if (i >= 2 && j >= 2)
                E += (ld)(i - 1) * (ld)(j - 1) / (ld)(i + j - 2) * fr.v_over_u;
            F_ll = cu * (z_ll + z_l * z_l * E);
            F_mm = cu * (z_mm + z_m * z_m * E);
            F_lm = cu * (z_lm + z_l * z_m * E);
        }
    }

    d.dl = (ld)j / lam + n * lp_l + F_l;
    d.dm = (ld)i / mu + n * lp_m + F_m;
    if (want_hess) {
        const ld lp_ll = (x + mu * T) * x / (den * den) * A +
                         T * x / (den * w) * B;
        const ld lp_mm = (1.0L + lam * T * x) / (den * den) * B +
                         T * x / (den * w) * A;
        const ld lp_lm = -(1.0L + mu * T) * x / (den * den) * A -
                         T * x / (den * w) * B;
        d.dll = -(ld)j / (lam * lam) + n * lp_ll + F_ll;
        d.dmm = -(ld)i / (mu * mu) + n * lp_mm + F_mm;
        d.dlm = n * lp_lm + F_lm;
    }
    return d;
}

// mu -> lambda limit of the interior formulas, with u and v evaluated at
// z = (lambda t)^{-2} - 1.
Derivs equal_rates(std::int64_t i, std::int64_t j, double t,
                   const Rates& rates, bool want_hess) {
    const ld lam = 0.5L * ((ld)rates.lambda + (ld)rates.mu);
    const ld T = t;
    const ld lt = lam * T;
    const ld one = 1.0L + lt;

    const ld lp_l = -T / (2.0L * one);
    const ld lp_ll = (1.0L - 2.0L * lt) * T * T / (12.0L * one * one);
    const ld lp_lm = (5.0L + 2.0L * lt) * T * T / (12.0L * one * one);

    Derivs d;
    const ld ij = (ld)i * (ld)j;
    const ld n = (ld)(i + j);

    ld F_l = 0, F_ll = 0, F_lm = 0;
    if (j >= 1) {
        const ld z = expm1l(-2.0L * logl(lt));
        const FRatios fr = f_ratios(i, j, to_z_double(z), want_hess);
        const ld cu = ij * fr.u / (ld)(i + j - 1);
        F_l = -cu / (lam * lam * lam * T * T);
        if (want_hess) {
            ld vterm = 0.0L;
            if (i >= 2 && j >= 2)
                vterm = (ld)(i - 1) * (ld)(j - 1) * fr.v_over_u * fr.u /
                        ((ld)(i + j - 2) * lt * lt);
            const ld uu = ij * fr.u * fr.u / ((ld)(i + j - 1) * lt * lt);
            const ld scale = ij / ((ld)(i + j - 1) * lam * lam * lam * lam * T * T);
            F_ll = scale * ((12.0L - lt * lt) * fr.u / 6.0L + vterm - uu);
            F_lm = scale * ((6.0L + lt * lt) * fr.u / 6.0L + vterm - uu);
        }
    }

    d.dl = (ld)j / lam + n * lp_l + F_l;
    d.dm = (ld)i / lam + n * lp_l + F_l;
    if (want_hess) {
        d.dll = -(ld)j / (lam * lam) + n * lp_ll + F_ll;
        d.dmm = -(ld)i / (lam * lam) + n * lp_ll + F_ll;
        d.dlm = n * lp_lm + F_lm;
    }
    return d;
}

// mu -> 0 limits, valid for j >= i >= 1 (the pure-birth support); x = e^{lambda t}.
Derivs mu_zero(std::int64_t i, std::int64_t j, double t, double lambda,
               bool want_hess) {
    const ld lam = lambda;
    const ld T = t;
    const ld w = expm1l(lam * T);
    const ld x = 1.0L + w;
    const ld I = (ld)i, J = (ld)j;

    const ld g1 = (I * x - J) / w * T;
    Derivs d;
    d.dl = -g1;
    d.dm = g1 - (I * (I - 1.0L) * x + J * (J + 1.0L) / x - 2.0L * I * J) /
                    ((I - J - 1.0L) * lam);
    if (want_hess) {
        const ld s0 = (I - J) * T * T * x / (w * w);
        d.dll = s0;
        d.dmm = s0 +
                I * (I - 1.0L) * J * (J + 1.0L) * w * w * w * w /
                    ((I - J - 1.0L) * (I - J - 1.0L) * (I - J - 2.0L) * lam *
                     lam * x * x) -
                (I * (I - 1.0L) * (x - 2.0L * lam * T) * x +
                 J * (J + 1.0L) * (1.0L / x + 2.0L * lam * T) / x -
                 2.0L * I * J) /
                    ((I - J - 1.0L) * lam * lam);
        d.dlm = -s0 + (I * (I - 1.0L) * (1.0L - lam * T) * x +
                       J * (J + 1.0L) * (1.0L + lam * T) / x - 2.0L * I * J) /
                          ((I - J - 1.0L) * (I - J - 1.0L) * lam * lam);
    }
    return d;
}

// lambda -> 0 limits, valid for j <= i (the pure-death support); x = e^{mu t}.
Derivs lambda_zero(std::int64_t i, std::int64_t j, double t, double mu,
                   bool want_hess) {
    const ld m = mu;
    const ld T = t;
    const ld w = expm1l(m * T);
    const ld x = 1.0L + w;
    const ld I = (ld)i, J = (ld)j;

    const ld g1 = (J * x - I) / w * T;
    Derivs d;
    d.dm = -g1;
    d.dl = g1 - (J * (J - 1.0L) * x + I * (I + 1.0L) / x - 2.0L * I * J) /
                    ((J - I - 1.0L) * m);
    if (want_hess) {
        const ld s0 = (J - I) * T * T * x / (w * w);
        d.dmm = s0;
        d.dll = s0 +
                J * (J - 1.0L) * I * (I + 1.0L) * w * w * w * w /
                    ((J - I - 1.0L) * (J - I - 1.0L) * (J - I - 2.0L) * m * m *
                     x * x) -
                (J * (J - 1.0L) * (x - 2.0L * m * T) * x +
                 I * (I + 1.0L) * (1.0L / x + 2.0L * m * T) / x -
                 2.0L * I * J) /
                    ((J - I - 1.0L) * m * m);
        d.dlm = -s0 + (J * (J - 1.0L) * (1.0L - m * T) * x +
                       I * (I + 1.0L) * (1.0L + m * T) / x - 2.0L * I * J) /
                          ((J - I - 1.0L) * (J - I - 1.0L) * m * m);
    }
    return d;
}

Derivs dispatch(const TransitionQuery& q, const Rates& rates, bool want_hess) {
    validate(q);
    validate(rates);
    const std::int64_t i = q.i;
    const std::int64_t j = q.j;
    const double t = q.t;
    const double lam = rates.lambda;
    const double mu = rates.mu;

    if (t == 0.0) return {};

    if (i == 0) {
        if (j == 0) return {};
        throw undefined_error(
            "transition from size 0 to positive size has zero probability");
    }

    if (lam == 0.0 && mu == 0.0) {
        if (j != i)
            throw undefined_error(
                "derivatives at lambda = mu = 0 are only defined when j = i");
        Derivs d;
        d.dl = d.dm = -(ld)i * (ld)t;
        d.dlm = (ld)i * (ld)i * (ld)t * (ld)t;
        return d;
    }

    const bool on_mu_axis = mu == 0.0 || mu < kAxisSwitch * lam;
    const bool on_lambda_axis = lam == 0.0 || lam < kAxisSwitch * mu;

    if (on_mu_axis) {
        if (j == i - 1)
            throw discontinuity_error(
                "derivative diverges at mu = 0 with j = i - 1", +1);
        if (want_hess && j == i - 2)
            throw discontinuity_error(
                "second derivative diverges at mu = 0 with j = i - 2", +1);
        if (j < i)
            throw undefined_error(
                "transition impossible at mu = 0 (j < i); derivative undefined");
        return mu_zero(i, j, t, lam, want_hess);
    }
    if (on_lambda_axis) {
        if (j == i + 1)
            throw discontinuity_error(
                "derivative diverges at lambda = 0 with j = i + 1", +1);
        if (want_hess && j == i + 2)
            throw discontinuity_error(
                "second derivative diverges at lambda = 0 with j = i + 2", +1);
        if (j > i)
            throw undefined_error(
                "transition impossible at lambda = 0 (j > i); derivative "
                "undefined");
        return lambda_zero(i, j, t, mu, want_hess);
    }

    if (equal_rates_regime(t, rates)) return equal_rates(i, j, t, rates, want_hess);
    return interior_unequal(i, j, t, rates, want_hess);
}

} // namespace

GradLogP log_prob_grad(const TransitionQuery& q, const Rates& rates) {
    const Derivs d = dispatch(q, rates, false);
    return {(double)d.dl, (double)d.dm};
}

HessLogP log_prob_hessian(const TransitionQuery& q, const Rates& rates) {
    const Derivs d = dispatch(q, rates, true);
    return {(double)d.dll, (double)d.dlm, (double)d.dmm};
}

} // namespace bdp
