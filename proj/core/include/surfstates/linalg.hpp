#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace surfstates {

using Complex = std::complex<double>;
using SparseHermitian = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

/// Max absolute row sum (an upper bound on the spectral radius).
double max_row_sum_norm(const SparseHermitian& H);

/// max |H - H^*| over all entries.
double hermiticity_defect(const SparseHermitian& H);

/// Ascending eigenvalues through a dense self-adjoint solve (LAPACK, eigenvalues only).
Eigen::VectorXd dense_eigenvalues(const SparseHermitian& H);

/// Lowest k eigenpairs of a dense real symmetric matrix, eigenvectors orthonormal in the Euclidean sense.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> lowest_eigenpairs(Eigen::MatrixXd A, int k);

SparseHermitian sparse_identity(Eigen::Index n);

/// A (x) I_B + I_A (x) B, index = a * dim(B) + b.
SparseHermitian kronecker_sum(const SparseHermitian& A, const SparseHermitian& B);

/// Writes "row col re im" lines (0-based), one per stored entry.
void write_coordinate_list(std::ostream& out, const SparseHermitian& H);

}  // namespace surfstates
