#include "meanscope/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace meanscope {

SpectralDecomposition eigh(const HermitianMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.matrix());
    if (solver.info() != Eigen::Success)
        throw InputError("eigh: eigensolver failed to converge");
    return SpectralDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

double spectral_norm(const HermitianMatrix& m) {
    const SpectralDecomposition d = eigh(m);
    return std::max(std::abs(d.min()), std::abs(d.max()));
}

HermitianMatrix fun_calc(const HermitianMatrix& m,
                         const std::function<double(double)>& phi) {
    const SpectralDecomposition d = eigh(m);
    RealVector mapped(d.eigenvalues.size());
    for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i) {
        const double value = phi(d.eigenvalues(i));
        if (!std::isfinite(value))
            throw DomainError("fun_calc: phi(" +
                              std::to_string(d.eigenvalues(i)) +
                              ") is not finite");
        mapped(i) = value;
    }
    const ComplexMatrix rebuilt = d.eigenvectors *
                                  mapped.asDiagonal().toDenseMatrix().cast<std::complex<double>>() *
                                  d.eigenvectors.adjoint();
    return hermitian_part(rebuilt);
}

namespace {

// Shared eigenvalue-policy core for sqrt / inverse / powers.
HermitianMatrix spectral_map(const HermitianMatrix& m,
                             const std::function<double(double)>& phi,
                             bool reject_negative, bool reject_singular,
                             const char* who) {
    const SpectralDecomposition d = eigh(m);
    const double lam_max = std::max(std::abs(d.min()), std::abs(d.max()));
    const double negative_floor = -kSingularRelCutoff * std::max(1.0, lam_max);
    const double singular_floor = kSingularRelCutoff * std::max(1.0, lam_max);
    RealVector mapped(d.eigenvalues.size());
    for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i) {
        double lam = d.eigenvalues(i);
        if (reject_negative) {
            if (lam < negative_floor)
                throw DomainError(std::string(who) + ": negative eigenvalue " +
                                  std::to_string(lam));
            lam = std::max(lam, 0.0);
        }
        if (reject_singular && lam <= singular_floor)
            throw SingularError(std::string(who) + ": eigenvalue " +
                                std::to_string(lam) +
                                " below relative cutoff");
        mapped(i) = phi(lam);
    }
    const ComplexMatrix rebuilt = d.eigenvectors *
                                  mapped.asDiagonal().toDenseMatrix().cast<std::complex<double>>() *
                                  d.eigenvectors.adjoint();
    return hermitian_part(rebuilt);
}

}  // namespace

HermitianMatrix matrix_sqrt(const HermitianMatrix& m) {
    return spectral_map(m, [](double t) { return std::sqrt(t); },
                        /*reject_negative=*/true, /*reject_singular=*/false,
                        "matrix_sqrt");
}

HermitianMatrix matrix_inverse(const HermitianMatrix& m) {
    return spectral_map(m, [](double t) { return 1.0 / t; },
                        /*reject_negative=*/false, /*reject_singular=*/true,
                        "matrix_inverse");
}

HermitianMatrix matrix_inv_sqrt(const HermitianMatrix& m) {
    return spectral_map(m, [](double t) { return 1.0 / std::sqrt(t); },
                        /*reject_negative=*/true, /*reject_singular=*/true,
                        "matrix_inv_sqrt");
}

HermitianMatrix matrix_power(const HermitianMatrix& m, double exponent) {
    return spectral_map(m, [exponent](double t) { return std::pow(t, exponent); },
                        /*reject_negative=*/true,
                        /*reject_singular=*/exponent < 0.0, "matrix_power");
}

OrderCertificate loewner_compare(const HermitianMatrix& x,
                                 const HermitianMatrix& y, double tol_abs,
                                 double tol_rel) {
    x.require_same_dim(y);
    const HermitianMatrix gap = y.minus(x);
    const double min_gap = eigh(gap).min();
    const double scale = std::max(spectral_norm(x), spectral_norm(y));
    const double tol = tol_abs + tol_rel * scale;
    OrderCertificate cert;
    cert.min_gap_eig = min_gap;
    cert.scale = scale;
    cert.tol_abs = tol_abs;
    cert.tol_rel = tol_rel;
    cert.holds = min_gap >= -tol;
    cert.numerical_equality = cert.holds && min_gap < 0.0;
    return cert;
}

ComplexMatrix random_unitary(Eigen::Index d, RandomStream& rng) {
    ComplexMatrix g(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) g(i, j) = rng.complex_normal();
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    // Fix column phases so the sampled distribution does not depend on
    // the QR sign convention.
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < d; ++j) {
        const std::complex<double> rjj = r(j, j);
        if (std::abs(rjj) > 0.0) q.col(j) *= rjj / std::abs(rjj);
    }
    return q;
}

ComplexVector random_unit_vector(Eigen::Index d, RandomStream& rng) {
    ComplexVector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = rng.complex_normal();
    const double n = v.norm();
    if (n == 0.0) return ComplexVector::Unit(d, 0);
    return v / n;
}

RealVector random_spectrum(Eigen::Index d, const SpectralBounds& bounds,
                           bool pin_endpoints, RandomStream& rng) {
    RealVector lam(d);
    for (Eigen::Index i = 0; i < d; ++i)
        lam(i) = rng.uniform(bounds.lower, bounds.upper);
    if (pin_endpoints && d >= 2) {
        lam(0) = bounds.lower;
        lam(1) = bounds.upper;
    }
    std::sort(lam.data(), lam.data() + d);
    return lam;
}

HermitianMatrix hermitian_from_spectrum(const RealVector& eigenvalues,
                                        const ComplexMatrix& unitary) {
    const ComplexMatrix m =
        unitary *
        eigenvalues.asDiagonal().toDenseMatrix().cast<std::complex<double>>() *
        unitary.adjoint();
    return hermitian_part(m);
}

HermitianMatrix random_banded_hermitian(Eigen::Index d,
                                        const SpectralBounds& bounds,
                                        bool pin_endpoints,
                                        std::uint64_t seed) {
    if (d < 1) throw InputError("random_banded_hermitian: dimension must be >= 1");
    RandomStream rng(seed);
    const RealVector lam = random_spectrum(d, bounds, pin_endpoints, rng);
    if (d == 1) return HermitianMatrix::scalar(lam(0));
    const ComplexMatrix u = random_unitary(d, rng);
    return hermitian_from_spectrum(lam, u);
}

}  // namespace meanscope
