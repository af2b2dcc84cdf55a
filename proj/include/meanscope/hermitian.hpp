#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "meanscope/errors.hpp"

namespace meanscope {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Dense complex Hermitian matrix, the universal operand.  Construction
// symmetrizes ((M + M*)/2) and rejects inputs whose Hermiticity defect
// exceeds 1e-12 relative to the Frobenius norm.
class HermitianMatrix {
  public:
    explicit HermitianMatrix(ComplexMatrix m) {
        if (m.rows() != m.cols())
            throw InputError("HermitianMatrix: matrix must be square");
        if (m.rows() < 1)
            throw InputError("HermitianMatrix: dimension must be >= 1");
        if (!m.allFinite())
            throw InputError("HermitianMatrix: non-finite entries");
        const double scale = std::max(1.0, m.norm());
        const double defect = (m - m.adjoint()).norm();
        if (defect > 1e-12 * scale)
            throw InputError("HermitianMatrix: Hermiticity defect " +
                             std::to_string(defect) + " exceeds tolerance");
        mat_ = 0.5 * (m + m.adjoint().eval());
    }

    static HermitianMatrix identity(Eigen::Index d) {
        return HermitianMatrix(ComplexMatrix::Identity(d, d));
    }

    static HermitianMatrix diagonal(const RealVector& entries) {
        ComplexMatrix m = ComplexMatrix::Zero(entries.size(), entries.size());
        for (Eigen::Index i = 0; i < entries.size(); ++i) m(i, i) = entries(i);
        return HermitianMatrix(std::move(m));
    }

    static HermitianMatrix scalar(double value) {
        ComplexMatrix m(1, 1);
        m(0, 0) = value;
        return HermitianMatrix(std::move(m));
    }

    Eigen::Index dim() const { return mat_.rows(); }
    const ComplexMatrix& matrix() const { return mat_; }

    double frobenius_norm() const { return mat_.norm(); }
    double trace_real() const { return mat_.trace().real(); }

    // Entry (0,0) as a real number; the scalar content of 1x1 results.
    double scalar_value() const { return mat_(0, 0).real(); }

    HermitianMatrix scaled(double s) const {
        return HermitianMatrix(ComplexMatrix(s * mat_));
    }

    HermitianMatrix plus(const HermitianMatrix& other) const {
        require_same_dim(other);
        return HermitianMatrix(ComplexMatrix(mat_ + other.mat_));
    }

    HermitianMatrix minus(const HermitianMatrix& other) const {
        require_same_dim(other);
        return HermitianMatrix(ComplexMatrix(mat_ - other.mat_));
    }

    void require_same_dim(const HermitianMatrix& other) const {
        if (other.dim() != dim())
            throw InputError("dimension mismatch: " + std::to_string(dim()) +
                             " vs " + std::to_string(other.dim()));
    }

  private:
    ComplexMatrix mat_;
};

// Symmetrize a product that is Hermitian in exact arithmetic.  Used for
// assembled expressions like S X S where roundoff leaves a small
// skew part; the defect is still bounds-checked inside the constructor
// after the explicit symmetrization here.
inline HermitianMatrix hermitian_part(const ComplexMatrix& m) {
    return HermitianMatrix(ComplexMatrix(0.5 * (m + m.adjoint().eval())));
}

}  // namespace meanscope
