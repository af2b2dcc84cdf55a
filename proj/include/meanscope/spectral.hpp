#pragma once

#include <cstdint>
#include <functional>

#include "meanscope/hermitian.hpp"
#include "meanscope/rng.hpp"

namespace meanscope {

// Eigendecomposition M = V diag(lambda) V*, eigenvalues ascending.
struct SpectralDecomposition {
    RealVector eigenvalues;
    ComplexMatrix eigenvectors;  // columns, unitary

    double min() const { return eigenvalues(0); }
    double max() const { return eigenvalues(eigenvalues.size() - 1); }
};

// Positive spectral band [lower, upper] used as generation target and
// hypothesis box.
struct SpectralBounds {
    double lower;
    double upper;
    bool strict;

    SpectralBounds(double lo, double hi, bool strict_required = false)
        : lower(lo), upper(hi), strict(strict_required) {
        if (!(lower > 0.0) || !(upper >= lower))
            throw InputError("SpectralBounds: need 0 < lower <= upper");
        if (strict && !(lower < upper))
            throw InputError("SpectralBounds: strict band needs lower < upper");
    }
};

// Numerical verdict for X <= Y in the Loewner order.
struct OrderCertificate {
    double min_gap_eig;  // smallest eigenvalue of Y - X
    double scale;        // max spectral norm of the two sides
    double tol_abs;
    double tol_rel;
    bool holds;
    bool numerical_equality;  // held only thanks to the tolerance band

    double tolerance() const { return tol_abs + tol_rel * scale; }
};

inline constexpr double kDefaultTolAbs = 1e-9;
inline constexpr double kDefaultTolRel = 1e-9;

// Relative eigenvalue cutoff below which inversions refuse to proceed.
inline constexpr double kSingularRelCutoff = 1e-12;

SpectralDecomposition eigh(const HermitianMatrix& m);

// Spectral norm (largest |eigenvalue|).
double spectral_norm(const HermitianMatrix& m);

// V diag(phi(lambda_i)) V*.  Throws DomainError if phi produces a
// non-finite value on the spectrum.
HermitianMatrix fun_calc(const HermitianMatrix& m,
                         const std::function<double(double)>& phi);

// Functional-calculus helpers with explicit domain policies.
HermitianMatrix matrix_sqrt(const HermitianMatrix& m);      // DomainError if negative spectrum
HermitianMatrix matrix_inverse(const HermitianMatrix& m);   // SingularError below cutoff
HermitianMatrix matrix_inv_sqrt(const HermitianMatrix& m);  // both policies
HermitianMatrix matrix_power(const HermitianMatrix& m, double exponent);

OrderCertificate loewner_compare(const HermitianMatrix& x,
                                 const HermitianMatrix& y,
                                 double tol_abs = kDefaultTolAbs,
                                 double tol_rel = kDefaultTolRel);

// Haar-ish unitary: QR of a complex Gaussian matrix with phase fix.
ComplexMatrix random_unitary(Eigen::Index d, RandomStream& rng);

ComplexVector random_unit_vector(Eigen::Index d, RandomStream& rng);

// Random Hermitian with spectrum inside [bounds.lower, bounds.upper];
// eigenvalues uniform, endpoints pinned when requested and d >= 2;
// deterministic per seed.
HermitianMatrix random_banded_hermitian(Eigen::Index d,
                                        const SpectralBounds& bounds,
                                        bool pin_endpoints,
                                        std::uint64_t seed);

// Same spectrum policy, but conjugated by a caller-supplied unitary
// (used for commuting families and aligned sharpness witnesses).
HermitianMatrix hermitian_from_spectrum(const RealVector& eigenvalues,
                                        const ComplexMatrix& unitary);

RealVector random_spectrum(Eigen::Index d, const SpectralBounds& bounds,
                           bool pin_endpoints, RandomStream& rng);

}  // namespace meanscope
