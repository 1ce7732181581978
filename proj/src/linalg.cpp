#include "adaflow/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adaflow {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> entries)
    : rows_(rows), cols_(cols), a_(entries) {
    if (a_.size() != rows * cols) throw DimensionMismatch("matrix entry count != rows*cols");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, Vector entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != rows * cols) throw DimensionMismatch("matrix entry count != rows*cols");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vector& v) { return std::sqrt(dot(v, v)); }

Vector operator+(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector +: size mismatch");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vector operator-(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector -: size mismatch");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vector operator*(double s, const Vector& v) {
    Vector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
    return r;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix +");
    Matrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
    return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matrix *");
    Matrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

Matrix operator*(double s, const Matrix& m) {
    Matrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = s * m(i, j);
    return r;
}

Vector mat_vec(const Matrix& m, const Vector& v) {
    if (m.cols() != v.size()) throw DimensionMismatch("mat_vec");
    Vector r(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r[i] += m(i, j) * v[j];
    return r;
}

Matrix transpose(const Matrix& m) {
    Matrix r(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(j, i) = m(i, j);
    return r;
}

Matrix outer(const Vector& a, const Vector& b) {
    Matrix r(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r(i, j) = a[i] * b[j];
    return r;
}

double frobenius_norm(const Matrix& m) {
    double s = 0.0;
    for (double x : m.entries()) s += x * x;
    return std::sqrt(s);
}

bool all_finite(const Vector& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

bool is_symmetric(const Matrix& m, double rel_tol) {
    if (m.rows() != m.cols()) return false;
    double diff = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            const double d = m(i, j) - m(j, i);
            diff += 2.0 * d * d;
        }
    return std::sqrt(diff) <= rel_tol * std::max(1.0, frobenius_norm(m));
}

Vector characteristic_polynomial(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("characteristic_polynomial: not square");
    const std::size_t n = a.rows();
    Vector c(n, 0.0);
    Matrix m = a;
    for (std::size_t k = 1; k <= n; ++k) {
        double tr = 0.0;
        for (std::size_t i = 0; i < n; ++i) tr += m(i, i);
        c[k - 1] = -tr / static_cast<double>(k);
        if (k == n) break;
        Matrix shifted = m;
        for (std::size_t i = 0; i < n; ++i) shifted(i, i) += c[k - 1];
        m = a * shifted;
    }
    return c;
}

bool is_hurwitz(const Matrix& a) {
    const Vector c = characteristic_polynomial(a);
    const std::size_t n = c.size();
    if (n == 0) return true;
    for (double ci : c)
        if (!(ci > 0.0)) return false;  // all coefficients positive is necessary
    switch (n) {
        case 1:
        case 2:
            return true;
        case 3:
            return c[0] * c[1] > c[2];
        case 4:
            return c[0] * c[1] * c[2] > c[2] * c[2] + c[0] * c[0] * c[3];
        default:
            throw DimensionMismatch("is_hurwitz: supported up to 4x4");
    }
}

Vector solve_linear(Matrix a, Vector b) {
    if (a.rows() != a.cols() || a.rows() != b.size()) throw DimensionMismatch("solve_linear");
    const std::size_t n = a.rows();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a(r, col)) > best) {
                best = std::abs(a(r, col));
                piv = r;
            }
        }
        if (best < 1e-13) throw SingularSystem("solve_linear: pivot below 1e-13");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
            std::swap(b[col], b[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
            b[r] -= f * b[col];
        }
    }
    Vector x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

namespace {

// Cholesky with strictly positive pivots; nullopt-style bool result.
bool cholesky_pd(const Matrix& m) {
    const std::size_t n = m.rows();
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (!(s > 0.0)) return false;
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return true;
}

}  // namespace

Matrix solve_lyapunov(const Matrix& a, const Matrix& q) {
    if (a.rows() != a.cols()) throw DimensionMismatch("solve_lyapunov: A not square");
    if (q.rows() != a.rows() || q.cols() != a.cols())
        throw DimensionMismatch("solve_lyapunov: Q shape != A shape");
    if (!is_symmetric(q)) throw NotSymmetric("solve_lyapunov: Q not symmetric");
    if (!is_positive_definite(q)) throw NotPositiveDefinite("solve_lyapunov: Q not positive definite");
    if (!is_hurwitz(a)) throw NotHurwitz("solve_lyapunov: A is not Hurwitz");

    const std::size_t n = a.rows();
    const Matrix at = transpose(a);

    // K = I (x) A^T + A^T (x) I acting on column-stacked vec(P).
    Matrix k(n * n, n * n);
    for (std::size_t col = 0; col < n; ++col)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                k(col * n + i, col * n + j) += at(i, j);      // I (x) A^T
                k(j * n + i, col * n + i) += at(j, col);      // A^T (x) I
            }

    Vector rhs(n * n);
    for (std::size_t col = 0; col < n; ++col)
        for (std::size_t i = 0; i < n; ++i) rhs[col * n + i] = -q(i, col);

    const Vector vec_p = solve_linear(k, rhs);
    Matrix p(n, n);
    for (std::size_t col = 0; col < n; ++col)
        for (std::size_t i = 0; i < n; ++i) p(i, col) = vec_p[col * n + i];

    // Exact solutions are symmetric; remove roundoff skew.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = 0.5 * (p(i, j) + p(j, i));
            p(i, j) = p(j, i) = s;
        }

    const Matrix residual = transpose(a) * p + p * a + q;
    if (frobenius_norm(residual) > 1e-9 * frobenius_norm(q))
        throw SingularSystem("solve_lyapunov: residual above 1e-9*||Q||_F");
    if (!is_positive_definite(p)) throw NotHurwitz("solve_lyapunov: P not positive definite");
    return p;
}

bool is_positive_definite(const Matrix& m, double sym_rel_tol) {
    if (m.rows() != m.cols()) throw DimensionMismatch("is_positive_definite: not square");
    if (!is_symmetric(m, sym_rel_tol)) throw NotSymmetric("is_positive_definite: not symmetric");
    return cholesky_pd(m);
}

double min_eigenvalue_symmetric(const Matrix& m, double sym_rel_tol) {
    if (m.rows() != m.cols()) throw DimensionMismatch("min_eigenvalue_symmetric: not square");
    if (!is_symmetric(m, sym_rel_tol)) throw NotSymmetric("min_eigenvalue_symmetric: not symmetric");
    const std::size_t n = m.rows();
    if (n == 1) return m(0, 0);

    Matrix w = m;
    const double scale = std::max(1.0, frobenius_norm(w));
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * w(p, q) * w(p, q);
        if (std::sqrt(off) <= 1e-13 * scale) break;

        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (w(p, q) == 0.0) continue;
                const double theta = (w(q, q) - w(p, p)) / (2.0 * w(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double wip = w(i, p), wiq = w(i, q);
                    w(i, p) = c * wip - s * wiq;
                    w(i, q) = s * wip + c * wiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const double wpj = w(p, j), wqj = w(q, j);
                    w(p, j) = c * wpj - s * wqj;
                    w(q, j) = s * wpj + c * wqj;
                }
            }
    }
    double mn = w(0, 0);
    for (std::size_t i = 1; i < n; ++i) mn = std::min(mn, w(i, i));
    return mn;
}

Vector matrix_exponential_action(const Matrix& a, double t, const Vector& v) {
    if (a.rows() != a.cols()) throw DimensionMismatch("matrix_exponential_action: not square");
    if (a.cols() != v.size()) throw DimensionMismatch("matrix_exponential_action: A/v mismatch");
    if (t < 0.0) throw std::invalid_argument("matrix_exponential_action: t must be >= 0");
    const std::size_t n = a.rows();

    Matrix b = t * a;
    double max_abs = 0.0;
    for (double x : b.entries()) max_abs = std::max(max_abs, std::abs(x));
    int squarings = 0;
    double scale = max_abs * static_cast<double>(n);
    while (scale > 0.5 && squarings < 60) {
        scale *= 0.5;
        ++squarings;
    }
    b = std::ldexp(1.0, -squarings) * b;

    // Taylor series of exp(B); with ||B|| <= 1/2 the terms fall below eps
    // well before k = 24.
    Matrix e = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    for (int k = 1; k <= 24; ++k) {
        term = (1.0 / static_cast<double>(k)) * (term * b);
        e = e + term;
        if (frobenius_norm(term) < 1e-18 * std::max(1.0, frobenius_norm(e))) break;
    }
    for (int s = 0; s < squarings; ++s) e = e * e;
    return mat_vec(e, v);
}

}  // namespace adaflow
