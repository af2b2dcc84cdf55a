#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "meanscope/spectral.hpp"

namespace meanscope {

enum class TriState { Yes, No, Unknown };

// Scalar operator monotone function f with f(1) = 1; defines the mean
// A sigma B = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}.
struct RepresentingFunction {
    std::string name;
    std::optional<double> alpha;  // weight for weighted families
    std::function<double(double)> eval;
    std::function<double(double)> deriv;
    TriState is_submultiplicative = TriState::Unknown;

    double operator()(double t) const { return eval(t); }
    bool submultiplicative() const { return is_submultiplicative == TriState::Yes; }
};

// Validates f(1)=1, sampled monotonicity and midpoint concavity on a
// log-spaced grid; throws ValidationError on violation.
void validate_representing_function(const RepresentingFunction& f);

// Grid check of f(xy) <= f(x) f(y) on a 200x200 log-uniform grid over
// [1e-3, 1e3]^2 with margin 1e-12.
TriState probe_submultiplicative(const RepresentingFunction& f);

// Registry ids: "arithmetic", "geometric", "right-trivial",
// "custom:<name>".  Weighted kinds require alpha in [0, 1].
RepresentingFunction representing_fn(const std::string& kind, double alpha);

// Register a user mean under "custom:<name>"; validated on entry,
// submultiplicativity probed on the grid.
void register_custom_mean(const std::string& name,
                          std::function<double(double)> eval,
                          std::function<double(double)> deriv);

// The builtin validation set used by acceptance sweeps: weighted
// geometric and arithmetic at 1/4, 1/2, 3/4 plus the right-trivial mean.
std::vector<RepresentingFunction> registered_means();

// A sigma B via functional calculus; eps > 0 regularizes A by A + eps I
// before inverting.  A singular with eps = 0 raises SingularError; a
// negative eigenvalue of B raises DomainError.
HermitianMatrix kubo_ando_mean(const HermitianMatrix& a,
                               const HermitianMatrix& b,
                               const RepresentingFunction& f,
                               double eps = 0.0);

// Weighted geometric / arithmetic shorthands used all over the suites.
HermitianMatrix weighted_geometric(const HermitianMatrix& a,
                                   const HermitianMatrix& b, double alpha);
HermitianMatrix weighted_arithmetic(const HermitianMatrix& a,
                                    const HermitianMatrix& b, double alpha);

struct AxiomReport {
    int trials = 0;
    int normalization_passes = 0;  // I sigma I = I, once per dim
    int normalization_checks = 0;
    int transformer_passes = 0;    // C*(A sigma B)C <= (C*AC) sigma (C*BC)
    int transformer_checks = 0;
    int monotonicity_passes = 0;   // A<=B, C<=D  =>  A sigma C <= B sigma D
    int monotonicity_checks = 0;
    int omega_identity_passes = 0; // w^{1-a}(X #_a Y) = (wX) #_a Y
    int omega_identity_checks = 0;
    bool eps_consistency = false;  // ||(A+eI) sigma B - A sigma B|| decreasing
    bool all_passed() const {
        return normalization_passes == normalization_checks &&
               transformer_passes == transformer_checks &&
               monotonicity_passes == monotonicity_checks &&
               omega_identity_passes == omega_identity_checks &&
               eps_consistency;
    }
};

AxiomReport check_mean_axioms(const RepresentingFunction& f,
                              const std::vector<Eigen::Index>& dims,
                              int trials, std::uint64_t seed,
                              double tol = 1e-8);

}  // namespace meanscope
