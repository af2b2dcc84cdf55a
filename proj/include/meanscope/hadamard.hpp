#pragma once

#include "meanscope/hermitian.hpp"

namespace meanscope {

// Kronecker product; eigenvalues are the pairwise products.
HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b);

// Canonical isometry U: C^d -> C^d (x) C^d with U e_n = e_n (x) e_n,
// as a d^2 x d matrix of 0/1 entries.  U*U = I_d exactly and
// U*(A (x) B)U is the entrywise product of A and B.
ComplexMatrix canonical_isometry(Eigen::Index d);

// Entrywise (Schur) product; the production path.
HermitianMatrix hadamard(const HermitianMatrix& a, const HermitianMatrix& b);

// U*(A (x) B)U via the isometry; kept as an independent oracle for the
// entrywise path and used by the Hadamard-compression map.
HermitianMatrix hadamard_via_isometry(const HermitianMatrix& a,
                                      const HermitianMatrix& b);

}  // namespace meanscope
