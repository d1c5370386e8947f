#include "surfstates/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <lapacke.h>

#include "surfstates/error.hpp"

namespace surfstates {

double max_row_sum_norm(const SparseHermitian& H) {
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(H.rows());
  for (Eigen::Index k = 0; k < H.outerSize(); ++k) {
    for (SparseHermitian::InnerIterator it(H, k); it; ++it) row_sums(it.row()) += std::abs(it.value());
  }
  return row_sums.size() == 0 ? 0.0 : row_sums.maxCoeff();
}

double hermiticity_defect(const SparseHermitian& H) {
  const SparseHermitian diff = H - SparseHermitian(H.adjoint());
  double worst = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k) {
    for (SparseHermitian::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

Eigen::VectorXd dense_eigenvalues(const SparseHermitian& H) {
  const lapack_int n = static_cast<lapack_int>(H.rows());
  Eigen::VectorXd w(n);
  if (n == 0) return w;
  bool real = true;
  for (Eigen::Index k = 0; k < H.outerSize() && real; ++k) {
    for (SparseHermitian::InnerIterator it(H, k); it; ++it) {
      if (it.value().imag() != 0.0) {
        real = false;
        break;
      }
    }
  }
  Eigen::Index kd = 0;
  for (Eigen::Index k = 0; k < H.outerSize(); ++k) {
    for (SparseHermitian::InnerIterator it(H, k); it; ++it) kd = std::max(kd, std::abs(it.row() - it.col()));
  }
  lapack_int info = 0;
  if (4 * kd < n) {
    // Lower band storage: ab(i - j, j) = H(i, j) for 0 <= i - j <= kd.
    const lapack_int ldab = static_cast<lapack_int>(kd + 1);
    if (real) {
      Eigen::MatrixXd ab = Eigen::MatrixXd::Zero(ldab, n);
      for (Eigen::Index k = 0; k < H.outerSize(); ++k) {
        for (SparseHermitian::InnerIterator it(H, k); it; ++it) {
          if (it.row() >= it.col()) ab(it.row() - it.col(), it.col()) = it.value().real();
        }
      }
      info = LAPACKE_dsbevd(LAPACK_COL_MAJOR, 'N', 'L', n, static_cast<lapack_int>(kd), ab.data(), ldab, w.data(),
                            nullptr, 1);
    } else {
      Eigen::MatrixXcd ab = Eigen::MatrixXcd::Zero(ldab, n);
      for (Eigen::Index k = 0; k < H.outerSize(); ++k) {
        for (SparseHermitian::InnerIterator it(H, k); it; ++it) {
          if (it.row() >= it.col()) ab(it.row() - it.col(), it.col()) = it.value();
        }
      }
      info = LAPACKE_zhbevd(LAPACK_COL_MAJOR, 'N', 'L', n, static_cast<lapack_int>(kd),
                            reinterpret_cast<lapack_complex_double*>(ab.data()), ldab, w.data(), nullptr, 1);
    }
  } else if (real) {
    Eigen::MatrixXd dense = Eigen::MatrixXcd(H).real();
    info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, dense.data(), n, w.data());
  } else {
    Eigen::MatrixXcd dense = Eigen::MatrixXcd(H);
    info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, reinterpret_cast<lapack_complex_double*>(dense.data()), n,
                          w.data());
  }
  if (info != 0) throw Error(ErrorKind::SolverFailure, "dense eigensolver failed, info = " + std::to_string(info));
  return w;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> lowest_eigenpairs(Eigen::MatrixXd A, int k) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  k = std::clamp(k, 0, static_cast<int>(n));
  Eigen::VectorXd w(n);
  Eigen::MatrixXd Z(n, std::max(k, 1));
  if (k == 0) return {Eigen::VectorXd(), Eigen::MatrixXd(n, 0)};
  lapack_int found = 0;
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(k));
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, A.data(), n, 0.0, 0.0, 1, k, 0.0, &found,
                                         w.data(), Z.data(), n, support.data());
  if (info != 0 || found != k) {
    throw Error(ErrorKind::SolverFailure, "partial eigensolver failed, info = " + std::to_string(info));
  }
  return {w.head(k), Z.leftCols(k)};
}

SparseHermitian sparse_identity(Eigen::Index n) {
  SparseHermitian I(n, n);
  I.setIdentity();
  return I;
}

SparseHermitian kronecker_sum(const SparseHermitian& A, const SparseHermitian& B) {
  const Eigen::Index na = A.rows();
  const Eigen::Index nb = B.rows();
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(A.nonZeros() * nb + B.nonZeros() * na));
  for (Eigen::Index k = 0; k < A.outerSize(); ++k) {
    for (SparseHermitian::InnerIterator it(A, k); it; ++it) {
      for (Eigen::Index q = 0; q < nb; ++q) entries.emplace_back(it.row() * nb + q, it.col() * nb + q, it.value());
    }
  }
  for (Eigen::Index p = 0; p < na; ++p) {
    for (Eigen::Index k = 0; k < B.outerSize(); ++k) {
      for (SparseHermitian::InnerIterator it(B, k); it; ++it) {
        entries.emplace_back(p * nb + it.row(), p * nb + it.col(), it.value());
      }
    }
  }
  SparseHermitian K(na * nb, na * nb);
  K.setFromTriplets(entries.begin(), entries.end());
  return K;
}

void write_coordinate_list(std::ostream& out, const SparseHermitian& H) {
  const auto old_precision = out.precision(17);
  for (Eigen::Index k = 0; k < H.outerSize(); ++k) {
    for (SparseHermitian::InnerIterator it(H, k); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace surfstates
