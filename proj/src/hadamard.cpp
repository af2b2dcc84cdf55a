#include "meanscope/hadamard.hpp"

namespace meanscope {

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
    const Eigen::Index da = a.dim(), db = b.dim();
    ComplexMatrix out(da * db, da * db);
    for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index j = 0; j < da; ++j)
            out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    return hermitian_part(out);
}

ComplexMatrix canonical_isometry(Eigen::Index d) {
    if (d < 1) throw InputError("canonical_isometry: dimension must be >= 1");
    ComplexMatrix u = ComplexMatrix::Zero(d * d, d);
    for (Eigen::Index n = 0; n < d; ++n) u(n * d + n, n) = 1.0;
    return u;
}

HermitianMatrix hadamard(const HermitianMatrix& a, const HermitianMatrix& b) {
    a.require_same_dim(b);
    return hermitian_part(a.matrix().cwiseProduct(b.matrix()));
}

HermitianMatrix hadamard_via_isometry(const HermitianMatrix& a,
                                      const HermitianMatrix& b) {
    a.require_same_dim(b);
    const ComplexMatrix u = canonical_isometry(a.dim());
    const HermitianMatrix big = kron(a, b);
    return hermitian_part(u.adjoint() * big.matrix() * u);
}

}  // namespace meanscope
