#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "adaflow/errors.hpp"

namespace adaflow {

using Vector = std::vector<double>;

/// Small dense row-major matrix. Everything in this project is n <= 4 (plant
/// states) or N <= a few (feature dimension), so no attempt is made at
/// large-scale performance.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}
    Matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> entries);
    Matrix(std::size_t rows, std::size_t cols, Vector entries);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const Vector& entries() const { return a_; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    Vector a_;
};

// Elementary vector/matrix operations.
double dot(const Vector& a, const Vector& b);
double norm2(const Vector& v);
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(double s, const Vector& v);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& m);
Vector mat_vec(const Matrix& m, const Vector& v);
Matrix transpose(const Matrix& m);
Matrix outer(const Vector& a, const Vector& b);
double frobenius_norm(const Matrix& m);
bool all_finite(const Vector& v);

/// ||M - M^T||_F <= tol * max(1, ||M||_F)
bool is_symmetric(const Matrix& m, double rel_tol = 1e-10);

/// Coefficients (c1..cn) of det(sI - A) = s^n + c1 s^(n-1) + ... + cn,
/// via the Faddeev-LeVerrier recursion.
Vector characteristic_polynomial(const Matrix& a);

/// All eigenvalue real parts strictly negative. Decided by the
/// Routh-Hurwitz conditions on the characteristic polynomial; exact for the
/// n <= 4 plants used here.
bool is_hurwitz(const Matrix& a);

/// Solve A^T P + P A = -Q for symmetric positive definite P by Kronecker
/// vectorization: (I (x) A^T + A^T (x) I) vec(P) = -vec(Q).
///
/// Throws NotHurwitz if A has an eigenvalue with real part >= 0,
/// NotSymmetric / NotPositiveDefinite if Q is unsuitable, and
/// SingularSystem if the linear solve degenerates. The result satisfies
/// ||A^T P + P A + Q||_F <= 1e-9 ||Q||_F.
Matrix solve_lyapunov(const Matrix& a, const Matrix& q);

/// True iff the symmetric matrix M has all eigenvalues > 0 (checked by
/// Cholesky pivots). Throws NotSymmetric when symmetry fails at rel_tol.
bool is_positive_definite(const Matrix& m, double sym_rel_tol = 1e-10);

/// Smallest eigenvalue of a symmetric matrix (cyclic Jacobi; accurate far
/// beyond the 1e-8 this project needs at these sizes).
double min_eigenvalue_symmetric(const Matrix& m, double sym_rel_tol = 1e-10);

/// exp(A t) v by scaling-and-squaring on a truncated series. Requires t >= 0.
Vector matrix_exponential_action(const Matrix& a, double t, const Vector& v);

/// Gaussian elimination with partial pivoting; throws SingularSystem.
Vector solve_linear(Matrix a, Vector b);

}  // namespace adaflow
