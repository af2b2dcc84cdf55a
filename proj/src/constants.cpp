#include "meanscope/constants.hpp"

#include <cmath>

namespace meanscope {

namespace {

constexpr int kCertGridPoints = 10000;
constexpr double kDegenerateSlope = 1e-14;
constexpr double kDegenerateIntercept = 1e-14;

void certify_chord_below(const RepresentingFunction& f, double mu, double nu,
                         double u, double v) {
    const double margin = 1e-12 * std::max(1.0, f.eval(v));
    for (int i = 0; i < kCertGridPoints; ++i) {
        const double t = u + (v - u) * i / double(kCertGridPoints - 1);
        const double gap = f.eval(t) - (mu * t + nu);
        if (gap < -margin)
            throw ValidationError(
                "chord certification failed: f - chord = " + std::to_string(gap) +
                " at t = " + std::to_string(t));
    }
    const double end_scale = std::max(1.0, std::abs(f.eval(v)));
    if (std::abs(f.eval(u) - (mu * u + nu)) > 1e-9 * end_scale ||
        std::abs(f.eval(v) - (mu * v + nu)) > 1e-9 * end_scale)
        throw ValidationError("chord certification failed at the endpoints");
}

void check_box(double a1, double b1, double a2, double b2) {
    if (!(b1 > 0.0) || !(b2 > 0.0) || !(b1 <= a1) || !(b2 <= a2))
        throw InputError("bounds must satisfy 0 < b1 <= a1 and 0 < b2 <= a2");
    if (b1 == a1 && b2 == a2)
        throw DegenerateBoundsError(
            "both bound boxes are degenerate: chord interval collapses");
}

}  // namespace

ChordConstants chord_constants(const RepresentingFunction& f, double a1,
                               double b1, double a2, double b2, double alpha) {
    check_box(a1, b1, a2, b2);
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InputError("alpha must lie in (0,1)");

    const double u = b2 / a1;
    const double v = a2 / b1;
    if (!(v - u > 1e-14 * std::max(1.0, v)))
        throw DegenerateBoundsError("chord interval [u, v] is degenerate");

    ChordConstants cc;
    cc.alpha = alpha;
    cc.bounds = {a1, b1, a2, b2};
    cc.u = u;
    cc.v = v;
    cc.f = f;
    cc.mu = (f.eval(v) - f.eval(u)) / (v - u);
    if (!(cc.mu > kDegenerateSlope))
        throw DegenerateSlopeError("chord slope mu = " + std::to_string(cc.mu) +
                                   " is degenerate");
    cc.nu = f.eval(u) - cc.mu * u;
    cc.omega_defined = cc.nu > kDegenerateIntercept;
    cc.omega = cc.omega_defined ? alpha * cc.nu / ((1.0 - alpha) * cc.mu) : 0.0;

    certify_chord_below(f, cc.mu, cc.nu, u, v);
    return cc;
}

DerivedConstants derived_constants(const ChordConstants& cc) {
    if (!(cc.mu > 0.0)) throw InputError("derived_constants: mu must be positive");
    const double alpha = cc.alpha;
    const double a1 = cc.bounds[0], b1 = cc.bounds[1];

    DerivedConstants dc;
    dc.rev_ando_add =
        (1.0 - alpha) * std::pow(cc.mu / alpha, alpha / (alpha - 1.0)) - cc.nu;
    dc.shisha_defined = cc.omega_defined;
    dc.shisha = 1.0 / cc.mu - 2.0 * std::sqrt(std::max(cc.omega, 0.0));
    dc.variance_bound = 0.25 * (a1 - b1) * (a1 - b1);
    const double df = cc.f.eval(cc.v) - cc.f.eval(cc.u);
    dc.oims_bound = 0.25 * a1 * a1 * df * df;
    dc.greub_defined = cc.omega_defined;
    dc.greub_factor =
        dc.greub_defined
            ? alpha / (cc.mu * std::pow(cc.omega, 1.0 - alpha))
            : 0.0;
    return dc;
}

double maximize_unimodal(const std::function<double(double)>& objective,
                         double lo, double hi) {
    if (!(hi > lo)) throw InputError("maximize_unimodal: empty interval");
    constexpr int kScan = 1024;
    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kScan; ++i) {
        const double t = lo + (hi - lo) * i / double(kScan - 1);
        const double value = objective(t);
        if (value > best_value) {
            best_value = value;
            best = i;
        }
    }
    double a = lo + (hi - lo) * std::max(0, best - 1) / double(kScan - 1);
    double b = lo + (hi - lo) * std::min(kScan - 1, best + 1) / double(kScan - 1);

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = objective(x1);
    double f2 = objective(x2);
    for (int iter = 0; iter < 50 && (b - a) > 1e-12 * std::max(1.0, std::abs(b));
         ++iter) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = objective(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = objective(x1);
        }
    }
    return 0.5 * (a + b);
}

HadamardChordConstants hadamard_constants(const RepresentingFunction& f,
                                          const std::array<double, 8>& bounds,
                                          double alpha, bool override_submult) {
    for (int i = 0; i < 4; ++i) {
        const double a = bounds[2 * i], b = bounds[2 * i + 1];
        if (!(b > 0.0) || !(b < a))
            throw InputError("hadamard_constants: every factor needs 0 < b_i < a_i");
    }
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InputError("alpha must lie in (0,1)");
    if (!f.submultiplicative() && !override_submult)
        throw HypothesisError(
            "hadamard_constants: representing function '" + f.name +
            "' is not submultiplicative (pass the override to force)");

    const double a1 = bounds[0], b1 = bounds[1], a2 = bounds[2], b2 = bounds[3];
    const double a3 = bounds[4], b3 = bounds[5], a4 = bounds[6], b4 = bounds[7];
    const double u = (b3 * b4) / (a1 * a2);
    const double v = (a3 * a4) / (b1 * b2);
    if (!(v - u > 1e-8 * std::max(1.0, v)))
        throw DegenerateBoundsError("hadamard chord interval is degenerate");

    HadamardChordConstants hc;
    hc.alpha = alpha;
    hc.bounds = bounds;
    hc.u = u;
    hc.v = v;
    hc.f = f;

    // Theorem-form slope: the tensor pair (A (x) B, C (x) D) feeds the
    // two-operand constants with bounds (a1 a2, b1 b2, a3 a4, b3 b4).
    hc.mu = a1 * a2 * b1 * b2 * (f.eval(u) - f.eval(v)) /
            (b1 * b2 * b3 * b4 - a1 * a2 * a3 * a4);
    hc.mu42 = (f.eval(v) - f.eval(u)) / (v - u);
    if (!(hc.mu42 > kDegenerateSlope))
        throw DegenerateSlopeError("hadamard chord slope is degenerate");
    hc.nu42 = f.eval(u) - hc.mu42 * u;
    hc.nu = hc.nu42;
    hc.omega41_defined = hc.nu > kDegenerateIntercept;
    hc.omega41 =
        hc.omega41_defined ? alpha * hc.nu / ((1.0 - alpha) * hc.mu42) : 0.0;

    certify_chord_below(f, hc.mu42, hc.nu42, u, v);

    // Ratio optimizer c and difference optimizer t0 on [u, v]; f concave
    // makes both objectives unimodal.  The golden-section result is
    // sharpened by bisecting the stationarity condition, which is
    // monotone across the interval; without that, f'(c) is only
    // first-order accurate where the ratio is flat.
    const double mu = hc.mu42, nu = hc.nu42;
    const auto refine_root = [&](const std::function<double(double)>& h,
                                 double fallback) {
        double lo = u, hi = v;
        if (!(h(lo) > 0.0) || !(h(hi) < 0.0)) return fallback;
        for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
            const double mid = 0.5 * (lo + hi);
            (h(mid) > 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    hc.c = maximize_unimodal(
        [&](double t) { return f.eval(t) / (mu * t + nu); }, u, v);
    hc.c = refine_root(
        [&](double t) { return f.deriv(t) * (mu * t + nu) - mu * f.eval(t); },
        hc.c);
    hc.t0 = maximize_unimodal(
        [&](double t) { return f.eval(t) - mu * t - nu; }, u, v);
    hc.t0 = refine_root([&](double t) { return f.deriv(t) - mu; }, hc.t0);
    hc.K = f.eval(hc.c) / (mu * hc.c + nu);
    hc.g_at_t0 = mu * hc.t0 + nu - f.eval(hc.t0);

    // Scalar certificates: f <= K (mu t + nu) and f - chord <= -g(t0).
    const double cert_margin = 1e-9 * std::max(1.0, f.eval(v));
    for (int i = 0; i < kCertGridPoints; ++i) {
        const double t = u + (v - u) * i / double(kCertGridPoints - 1);
        const double ft = f.eval(t);
        if (ft > hc.K * (mu * t + nu) + cert_margin)
            throw ValidationError("ratio certificate failed at t = " +
                                  std::to_string(t));
        if (ft - mu * t - nu > -hc.g_at_t0 + cert_margin)
            throw ValidationError("difference certificate failed at t = " +
                                  std::to_string(t));
    }
    return hc;
}

}  // namespace meanscope
