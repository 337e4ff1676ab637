#ifndef CODEDLAB_CORE_LINALG_HPP
#define CODEDLAB_CORE_LINALG_HPP

#include <vector>

#include "core/matrix.hpp"

namespace codedlab {

// Largest singular value.
double spectral_norm(const Matrix& m);

// Orthonormal basis of the column space of a full-column-rank matrix;
// rank deficiency raises RankDeficient.
Matrix orthonormal_basis(const Matrix& m);

size_t numerical_rank(const Matrix& m);

// Moore-Penrose pseudoinverse via SVD with a relative singular-value cutoff.
Matrix pseudoinverse(const Matrix& m);

// Eigenvalues of a symmetric/Hermitian matrix, sorted descending.
std::vector<double> sym_eigenvalues(const Matrix& m);

// Solves A x = rhs by LU with partial pivoting; SingularSystem on breakdown.
Matrix solve_lu(const Matrix& a, const Matrix& rhs);

// Least squares solve via column-pivoted QR; RankDeficient if A loses rank.
Matrix solve_least_squares(const Matrix& a, const Matrix& rhs);

}  // namespace codedlab

#endif
