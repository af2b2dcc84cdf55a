#pragma once

// Test-only scalar evaluations of every registered inequality at d = 1
// with the identity map.  Plain double arithmetic, no matrix code, so it
// stays an independent check on the assembly path.

#include <cmath>
#include <optional>
#include <string>

#include "meanscope/cases.hpp"

namespace meanscope::oracle {

struct ScalarSides {
    double lhs;
    double rhs;
};

struct ScalarInputs {
    double a = 0.0;  // operand A
    double b = 0.0;  // operand B
    double c = 0.0;  // quad operand C
    double d = 0.0;  // quad operand D
    double alpha = 0.5;
    BoundConfig bounds;
};

inline double chord_mu(const RepresentingFunction& f, double u, double v) {
    return (f.eval(v) - f.eval(u)) / (v - u);
}

inline double chord_nu(const RepresentingFunction& f, double u, double v) {
    return f.eval(u) - chord_mu(f, u, v) * u;
}

// Scalar Kubo-Ando mean: a f(b/a).
inline double smean(const RepresentingFunction& f, double a, double b) {
    return a * f.eval(b / a);
}

inline std::optional<ScalarSides> evaluate(CaseId id,
                                           const RepresentingFunction& f,
                                           const ScalarInputs& in) {
    const double a = in.a, b = in.b, alpha = in.alpha;
    const auto& box = in.bounds.box;
    const double u = box[3] / box[0];
    const double v = box[2] / box[1];
    const double mu = chord_mu(f, u, v);
    const double nu = chord_nu(f, u, v);
    const auto geo = [](double x, double y, double w) {
        return std::pow(x, 1.0 - w) * std::pow(y, w);
    };

    switch (id) {
        case CaseId::MainLeft: {
            const double omega = alpha * nu / ((1.0 - alpha) * mu);
            return ScalarSides{std::pow(omega, 1.0 - alpha) * geo(a, b, alpha),
                               alpha * nu / mu * a + alpha * b};
        }
        case CaseId::MainRight:
            return ScalarSides{alpha * nu / mu * a + alpha * b,
                               alpha / mu * smean(f, a, b)};
        case CaseId::Eq3Premap:
            return ScalarSides{alpha * b + alpha * nu / mu * a,
                               alpha / mu * smean(f, a, b)};
        case CaseId::DmSecond: {
            const double m1 = std::sqrt(box[1]), M1 = std::sqrt(box[0]);
            const double m2 = std::sqrt(box[3]), M2 = std::sqrt(box[2]);
            return ScalarSides{M2 * m2 / (M1 * m1) * a + b,
                               (M2 / m1 + m2 / M1) * std::sqrt(a * b)};
        }
        case CaseId::DmFirst: {
            const double m = in.bounds.rel_lo, M = in.bounds.rel_hi;
            return ScalarSides{M * m * a + b, (M + m) * std::sqrt(a * b)};
        }
        case CaseId::AndoBaseline:
            return ScalarSides{geo(a, b, alpha), geo(a, b, alpha)};
        case CaseId::RevAndoAdd: {
            const double rev =
                (1.0 - alpha) * std::pow(mu / alpha, alpha / (alpha - 1.0)) - nu;
            return ScalarSides{0.0, rev * a};
        }
        case CaseId::RevAndoSym: {
            const double coeff = 1.0 / (4.0 * mu) - nu;
            return ScalarSides{0.0, coeff * std::min(a, b)};
        }
        case CaseId::RevAndoSeo: {
            const double m = in.bounds.rel_lo, M = in.bounds.rel_hi;
            const double mu_s = chord_mu(f, m, M);
            const double nu_s = chord_nu(f, m, M);
            const double seo =
                (1.0 - alpha) * std::pow(mu_s / alpha, alpha / (alpha - 1.0)) -
                nu_s;
            return ScalarSides{0.0, seo * a};
        }
        case CaseId::KmGeneral: {
            const double g = smean(f, a, b);
            return ScalarSides{b / g - g / a,
                               1.0 / mu - 2.0 * std::sqrt(nu / mu)};
        }
        case CaseId::ShishaMond: {
            const double m = in.bounds.rel_lo, M = in.bounds.rel_hi;
            const double g = std::sqrt(a * b);
            return ScalarSides{b / g - g / a,
                               std::pow(std::sqrt(M) - std::sqrt(m), 2)};
        }
        case CaseId::KmTwoSided: {
            const double m1 = std::sqrt(box[1]), M1 = std::sqrt(box[0]);
            const double m2 = std::sqrt(box[3]), M2 = std::sqrt(box[2]);
            const double g = std::sqrt(a * b);
            return ScalarSides{
                b / g - g / a,
                std::pow(std::sqrt(M2 / m1) - std::sqrt(m2 / M1), 2)};
        }
        case CaseId::VarianceLemma:
            return ScalarSides{0.0, 0.25 * (box[0] - box[1]) * (box[0] - box[1])};
        case CaseId::OimsGeneral:
        case CaseId::OimsVector: {
            const double df = f.eval(v) - f.eval(u);
            return ScalarSides{0.0, 0.25 * box[0] * box[0] * df * df};
        }
        case CaseId::OimsGeometric: {
            // Certified bounds collapse to the scalars themselves at d=1.
            const double core =
                std::pow(0.5 * (std::sqrt(a * b) - std::sqrt(a * b)), 2);
            return ScalarSides{a * b - a * b, core};
        }
        case CaseId::GreubRheinboldt: {
            const double m = box[1], M = box[0];
            const double ug = 1.0 / (M * M), vg = 1.0 / (m * m);
            const double mu_g = chord_mu(f, ug, vg);
            const double nu_g = chord_nu(f, ug, vg);
            const double omega_g = alpha * nu_g / ((1.0 - alpha) * mu_g);
            const double factor =
                alpha / (mu_g * std::pow(omega_g, 1.0 - alpha));
            return ScalarSides{geo(a, 1.0 / a, alpha),
                               factor * smean(f, a, 1.0 / a)};
        }
        case CaseId::TensorEq8:
            return ScalarSides{
                smean(f, a * in.b, in.c * in.d),
                smean(f, a, in.c) * smean(f, in.b, in.d)};
        default:
            break;
    }

    // Quad-shaped Hadamard cases; at d = 1 the Hadamard product is the
    // plain product.
    const auto& q = in.bounds.quad;
    const double uq = q[5] * q[7] / (q[0] * q[2]);
    const double vq = q[4] * q[6] / (q[1] * q[3]);
    const double muq = chord_mu(f, uq, vq);
    const double nuq = chord_nu(f, uq, vq);
    const double ab = in.a * in.b, cd = in.c * in.d;
    const double g = smean(f, in.a, in.c) * smean(f, in.b, in.d);
    const auto geo2 = [&](double x, double y) {
        return std::pow(x, 1.0 - in.alpha) * std::pow(y, in.alpha);
    };

    switch (id) {
        case CaseId::Had41I:
            return ScalarSides{in.alpha * nuq / muq * ab + in.alpha * cd,
                               in.alpha / muq * g};
        case CaseId::Had41II: {
            const double omega = in.alpha * nuq / ((1.0 - in.alpha) * muq);
            return ScalarSides{std::pow(omega, 1.0 - in.alpha) * geo2(ab, cd),
                               in.alpha / muq * g};
        }
        case CaseId::Had41III: {
            const double omega = in.alpha * nuq / ((1.0 - in.alpha) * muq);
            const double ratio =
                in.alpha / muq * std::pow(omega, in.alpha - 1.0);
            const double coeff =
                (ratio - 1.0) * q[0] * q[2] * f.eval(q[4] * q[6] / (q[1] * q[3]));
            return ScalarSides{geo2(ab, cd) - g, coeff};
        }
        case CaseId::Had41IV: {
            const double rev = (1.0 - in.alpha) *
                                   std::pow(muq / in.alpha,
                                            in.alpha / (in.alpha - 1.0)) -
                               nuq;
            const double gg = geo2(in.a, in.c) * geo2(in.b, in.d);
            return ScalarSides{geo2(ab, cd) - gg, rev * q[0] * q[2]};
        }
        case CaseId::Had41V: {
            const double omega = nuq / muq;
            return ScalarSides{cd / g - g / ab,
                               1.0 / muq - 2.0 * std::sqrt(omega)};
        }
        case CaseId::Had42I: {
            // Ratio maximizer on [uq, vq] via a dense scan (oracle-grade).
            double best = 0.0;
            for (int i = 0; i <= 200000; ++i) {
                const double t = uq + (vq - uq) * i / 200000.0;
                best = std::max(best, f.eval(t) / (muq * t + nuq));
            }
            return ScalarSides{smean(f, ab, cd), best * g};
        }
        case CaseId::Had42II: {
            double best = -1e300;
            for (int i = 0; i <= 200000; ++i) {
                const double t = uq + (vq - uq) * i / 200000.0;
                best = std::max(best, f.eval(t) - muq * t - nuq);
            }
            return ScalarSides{smean(f, ab, cd) - g, best * ab};
        }
        default:
            return std::nullopt;
    }
}

}  // namespace meanscope::oracle
