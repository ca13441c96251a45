#pragma once

#include <complex>
#include <vector>

namespace qbatch {

// Dense symmetric eigendecomposition by cyclic Jacobi sweeps.
// `a` is row-major n*n and symmetric. Eigenvalues come back ascending;
// eigenvectors are the columns of `vecs` (row-major n*n), each with a
// deterministic sign (largest-magnitude entry positive).
// Throws NumericError if the sweeps fail to converge.
void jacobi_eigh(int n, std::vector<double> a, std::vector<double>& values,
                 std::vector<double>& vecs);

// Thin SVD of a row-major m*n complex matrix: a = u * diag(s) * vh,
// u m*k, s k, vh k*n with k = min(m, n); singular values descending.
void svd(int m, int n, const std::vector<std::complex<double>>& a,
         std::vector<std::complex<double>>& u, std::vector<double>& s,
         std::vector<std::complex<double>>& vh);

}  // namespace qbatch
