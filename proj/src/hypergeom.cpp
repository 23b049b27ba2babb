#include "bdp/hypergeom.hpp"

#include <cmath>
#include <limits>

namespace bdp {

void validate(const HyperArgs& args) {
    if (args.a < 0 || args.b < 0)
        throw domain_error("hypergeometric indices a, b must be >= 0");
    if (args.k > 1)
        throw domain_error("hypergeometric offset k must be <= 1");
    if (!std::isfinite(args.z))
        throw domain_error("hypergeometric argument z must be finite");
    if (args.z <= -1.0)
        throw domain_error("hypergeometric argument z must be > -1");
}

namespace {

// y * 2^exp2 with |y| kept inside [2^-8192, 2^8192] by periodic rescaling.
struct Scaled {
    long double y;
    long exp2;
};

Scaled ttrr_core(const HyperArgs& args) {
    const std::int64_t m = std::min(args.a, args.b);
    const std::int64_t big = std::max(args.a, args.b);
    const long double z = args.z;
    const long double k = (long double)args.k;

    if (args.z == 0.0 || m == 0) return {1.0L, 0};

    const long double y1 = 1.0L + (long double)big * z / ((long double)big + 1.0L - k);
    if (m == 1) return {y1, 0};

    Scaled acc{y1, 0};
    long double ratio = y1;
    for (std::int64_t n = 2; n <= m; ++n) {
        if (ratio == 0.0L)
            throw numeric_error(
                "three-term recurrence ratio collapsed to zero");
        const long double bn = (long double)big + (long double)n - k;
        ratio = 1.0L + (z / bn) *
                           ((long double)(big - n + 1) +
                            (long double)(n - 1) * ((long double)(n - 1) - k) /
                                ((bn - 1.0L) * ratio));
        acc.y *= ratio;
        if (fabsl(acc.y) > 0x1p8192L ||
            (acc.y != 0.0L && fabsl(acc.y) < 0x1p-8192L)) {
            int e;
            acc.y = frexpl(acc.y, &e);
            acc.exp2 += e;
        }
    }
    return acc;
}

} // namespace

double hyp2f1_ttrr(const HyperArgs& args) {
    validate(args);
    const Scaled r = ttrr_core(args);
    return (double)ldexpl(r.y, (int)std::min<long>(
                                   std::max<long>(r.exp2, -1000000), 1000000));
}

SignedLog hyp2f1_ttrr_log(const HyperArgs& args) {
    validate(args);
    const Scaled r = ttrr_core(args);
    if (r.y == 0.0L)
        return {0, -std::numeric_limits<double>::infinity()};
    const long double ln2 = 0.69314718055994530941723212145817656807L;
    const int sign = r.y > 0.0L ? +1 : -1;
    return {sign, (double)(logl(fabsl(r.y)) + (long double)r.exp2 * ln2)};
}

double backward_step(const HyperArgs& args, double y_b1, double y_b2) {
    validate(args);
    if (args.z == 0.0)
        throw domain_error("backward recursion divides by z; z must be nonzero");
    const long double a = (long double)args.a;
    const long double b = (long double)args.b;
    const long double k = (long double)args.k;
    const long double z = args.z;
    if (!(b + 1.0L - k > 0.0L))
        throw domain_error("backward recursion requires b + 1 - k > 0");
    const long double lead =
        (a + b + 2.0L - k) * (a + b + 1.0L - k) / ((b + 1.0L) * (b + 1.0L - k) * z);
    const long double inner =
        (long double)y_b2 -
        (1.0L + (a - b - 1.0L) * z / (a + b + 2.0L - k)) * (long double)y_b1;
    return (double)(lead * inner);
}

double ttrr_residual(const HyperArgs& args, double y_prev, double y_cur,
                     double y_next) {
    const long double a = (long double)args.a;
    const long double b = (long double)args.b;
    const long double k = (long double)args.k;
    const long double z = args.z;
    const long double r =
        (a + b + 1.0L - k) * (a + b - k) * (long double)y_next -
        (a + b - k) * (a + b + 1.0L - k + (a - b) * z) * (long double)y_cur -
        b * (b - k) * z * (long double)y_prev;
    return (double)r;
}

} // namespace bdp
