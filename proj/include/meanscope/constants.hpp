#pragma once

#include <array>

#include "meanscope/means.hpp"

namespace meanscope {

// Secant constants of f across the relative spectral interval
// [u, v] = [b2/a1, a2/b1]:
//
//   mu = (f(v) - f(u)) / (v - u)        (slope; equals the product form
//                                        a1 b1 (f(u) - f(v)) / (b1 b2 - a1 a2))
//   nu = f(u) - mu u                    (intercept)
//   omega = alpha nu / ((1 - alpha) mu)
//
// The chord lies below f on [u, v] by concavity; construction certifies
// that on a 10^4-point grid and checks endpoint equality.
struct ChordConstants {
    double mu = 0.0;
    double nu = 0.0;
    double omega = 0.0;
    bool omega_defined = false;  // false when nu ~ 0 (e.g. f(t) = t)
    double alpha = 0.0;
    std::array<double, 4> bounds{};  // a1, b1, a2, b2
    double u = 0.0;
    double v = 0.0;
    RepresentingFunction f;
};

ChordConstants chord_constants(const RepresentingFunction& f, double a1,
                               double b1, double a2, double b2, double alpha);

// Closed-form consequences of a ChordConstants block.
struct DerivedConstants {
    double rev_ando_add = 0.0;   // (1-a)(mu/a)^{a/(a-1)} - nu
    double shisha = 0.0;         // mu^{-1} - 2 sqrt(omega)
    bool shisha_defined = false; // false when omega undefined
    double variance_bound = 0.0; // (a1 - b1)^2 / 4
    double oims_bound = 0.0;     // a1^2 (f(v) - f(u))^2 / 4
    double greub_factor = 0.0;   // alpha / (mu omega^{1-alpha})
    bool greub_defined = false;
};

DerivedConstants derived_constants(const ChordConstants& cc);

// Constants for the tensor/Hadamard inequalities.  The chord interval is
//   [u, v] = [b3 b4 / (a1 a2), a3 a4 / (b1 b2)]
// shared by both constant blocks; mu/nu/omega41 follow the weighted
// pattern above, while the ratio block fixes
//   c  = argmax f(t) / (mu t + nu)   (so K = f(c)/(mu c + nu) = f'(c)/mu)
//   t0 = argmax f(t) - mu t - nu     (so -g(t0) is the best additive gap)
struct HadamardChordConstants {
    double u = 0.0;
    double v = 0.0;
    double mu = 0.0;       // Theorem-form slope (equals mu42)
    double nu = 0.0;
    double omega41 = 0.0;  // alpha nu / ((1-alpha) mu)
    bool omega41_defined = false;
    double mu42 = 0.0;     // chord-form slope
    double nu42 = 0.0;
    double c = 0.0;
    double t0 = 0.0;
    double K = 0.0;        // sharp ratio constant, 1/omega42
    double g_at_t0 = 0.0;  // mu42 t0 + nu42 - f(t0) <= 0
    double alpha = 0.0;
    std::array<double, 8> bounds{};  // a1, b1, a2, b2, a3, b3, a4, b4
    RepresentingFunction f;
};

HadamardChordConstants hadamard_constants(const RepresentingFunction& f,
                                          const std::array<double, 8>& bounds,
                                          double alpha,
                                          bool override_submult = false);

// Scalar golden-section maximizer used for c and t0: coarse 1024-point
// scan for a bracket, then golden-section refinement to 1e-12 in t.
double maximize_unimodal(const std::function<double(double)>& objective,
                         double lo, double hi);

}  // namespace meanscope
