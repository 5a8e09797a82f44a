#include "observkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace observkit {

namespace {

void require_finite(std::span<const double> v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw InvalidArgument(std::string(what) + ": non-finite entry");
        }
    }
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(op) + ": shape mismatch " + a.shape() + " vs " + b.shape());
    }
}

void require_square(const Matrix& m, const char* op) {
    if (!m.is_square()) {
        throw DimensionError(std::string(op) + ": expected a square matrix, got " + m.shape());
    }
}

// Dense LU with partial pivoting, in place. Returns the permutation.
std::vector<std::size_t> lu_factor(Matrix& lu, double threshold) {
    const std::size_t n = lu.rows();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(lu(i, k)) > std::abs(lu(p, k))) p = i;
        }
        const double pivot = std::abs(lu(p, k));
        if (!(pivot > threshold)) {
            throw SingularMatrixError("solve: matrix is numerically singular (pivot " + std::to_string(pivot) +
                                          " at column " + std::to_string(k) + ")",
                                      pivot, threshold);
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
            std::swap(perm[k], perm[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = lu(i, k) / lu(k, k);
            lu(i, k) = l;
            for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= l * lu(k, j);
        }
    }
    return perm;
}

Matrix lu_solve(const Matrix& lu, const std::vector<std::size_t>& perm, const Matrix& rhs) {
    const std::size_t n = lu.rows();
    Matrix x(n, rhs.cols());
    for (std::size_t c = 0; c < rhs.cols(); ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = rhs(perm[i], c);
            for (std::size_t j = 0; j < i; ++j) s -= lu(i, j) * x(j, c);
            x(i, c) = s;
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = x(i, c);
            for (std::size_t j = i + 1; j < n; ++j) s -= lu(i, j) * x(j, c);
            x(i, c) = s / lu(i, i);
        }
    }
    return x;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("Matrix: " + std::to_string(data_.size()) + " entries do not fill " + shape());
    }
    require_finite(data_, "Matrix");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionError("Matrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
    require_finite(data_, "Matrix");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
    require_finite(d, "Matrix::diagonal");
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::column(std::span<const double> v) {
    return Matrix(v.size(), 1, std::vector<double>(v.begin(), v.end()));
}

Vector Matrix::col(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

std::string Matrix::shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

Matrix& Matrix::operator+=(const Matrix& rhs) {
    require_same_shape(*this, rhs, "operator+");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    require_same_shape(*this, rhs, "operator-");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }
Matrix operator*(const Matrix& a, const Matrix& b) { return matmul(a, b); }

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
    return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: cannot multiply " + a.shape() + " by " + b.shape());
    }
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Vector matvec(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) {
        throw DimensionError("matvec: cannot multiply " + a.shape() + " by a vector of length " +
                             std::to_string(x.size()));
    }
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        throw DimensionError("hstack: row counts differ (" + a.shape() + " vs " + b.shape() + ")");
    }
    Matrix r(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) r(i, a.cols() + j) = b(i, j);
    }
    return r;
}

double norm_1(const Matrix& m) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

double norm_frobenius(const Matrix& m) {
    double s = 0.0;
    for (double x : m.entries()) s += x * x;
    return std::sqrt(s);
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double d = 0.0;
    for (std::size_t k = 0; k < a.entries().size(); ++k) {
        d = std::max(d, std::abs(a.entries()[k] - b.entries()[k]));
    }
    return d;
}

double trace(const Matrix& m) {
    require_square(m, "trace");
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, i);
    return s;
}

Matrix symmetrize(const Matrix& m) {
    require_square(m, "symmetrize");
    Matrix s(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
    return s;
}

Matrix expm(const Matrix& a, double t) {
    require_square(a, "expm");
    if (!std::isfinite(t)) throw InvalidArgument("expm: time must be finite");
    const std::size_t n = a.rows();
    if (n == 0) return Matrix{};

    Matrix x = a * t;
    const double norm = norm_1(x);
    int squarings = 0;
    if (norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
        x *= std::ldexp(1.0, -squarings);
    }

    // Diagonal Padé (6,6): N(X) = Σ c_k X^k, D(X) = Σ (-1)^k c_k X^k.
    constexpr int q = 6;
    const Matrix eye = Matrix::identity(n);
    double c = 0.5;
    Matrix power = x;
    Matrix num = eye + c * x;
    Matrix den = eye - c * x;
    for (int k = 2; k <= q; ++k) {
        c *= static_cast<double>(q - k + 1) / static_cast<double>(k * (2 * q - k + 1));
        power = matmul(x, power);
        num += c * power;
        if (k % 2 == 0) {
            den += c * power;
        } else {
            den -= c * power;
        }
    }

    Matrix result = solve(den, num);
    for (int k = 0; k < squarings; ++k) result = matmul(result, result);

    require_finite(result.entries(), "expm: result overflowed");
    return result;
}

Vector singular_values(const Matrix& m) {
    // Work on the orientation with fewer columns.
    Matrix u = m.rows() >= m.cols() ? m : transpose(m);
    const std::size_t rows = u.rows();
    const std::size_t cols = u.cols();
    constexpr double eps = std::numeric_limits<double>::epsilon();

    for (int sweep = 0; sweep < 80; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < cols; ++p) {
            for (std::size_t q = p + 1; q < cols; ++q) {
                double alpha = 0.0;
                double beta = 0.0;
                double gamma = 0.0;
                for (std::size_t i = 0; i < rows; ++i) {
                    alpha += u(i, p) * u(i, p);
                    beta += u(i, q) * u(i, q);
                    gamma += u(i, p) * u(i, q);
                }
                if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double tan = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cos = 1.0 / std::sqrt(1.0 + tan * tan);
                const double sin = cos * tan;
                for (std::size_t i = 0; i < rows; ++i) {
                    const double up = u(i, p);
                    const double uq = u(i, q);
                    u(i, p) = cos * up - sin * uq;
                    u(i, q) = sin * up + cos * uq;
                }
            }
        }
        if (!rotated) break;
    }

    Vector sv(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i) s += u(i, j) * u(i, j);
        sv[j] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

std::size_t rank(const Matrix& m, double rel_tol) {
    if (!(rel_tol > 0.0)) throw InvalidArgument("rank: rel_tol must be positive");
    if (m.empty()) return 0;
    const Vector sv = singular_values(m);
    if (sv.front() == 0.0) return 0;
    const double cutoff = rel_tol * sv.front();
    return static_cast<std::size_t>(std::count_if(sv.begin(), sv.end(), [&](double s) { return s > cutoff; }));
}

double condition_number(const Matrix& m) {
    if (m.empty()) return 1.0;
    const Vector sv = singular_values(m);
    if (sv.back() == 0.0) return std::numeric_limits<double>::infinity();
    return sv.front() / sv.back();
}

DefinitenessResult check_positive_definite(const Matrix& m, double tol) {
    require_square(m, "is_positive_definite");
    if (!(tol > 0.0)) throw InvalidArgument("is_positive_definite: tol must be positive");
    const std::size_t n = m.rows();
    Matrix s = symmetrize(m);

    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(s(i, i)));

    DefinitenessResult result;
    result.threshold = tol * max_diag;
    if (n == 0) {
        result.positive_definite = true;
        return result;
    }
    if (max_diag == 0.0) return result;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    double min_pivot = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (s(i, i) > s(p, p)) p = i;
        }
        const double pivot = s(p, p);
        min_pivot = std::min(min_pivot, pivot);
        if (!(pivot > result.threshold)) {
            result.min_pivot = pivot;
            return result;
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(s(k, j), s(p, j));
            for (std::size_t i = 0; i < n; ++i) std::swap(s(i, k), s(i, p));
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = s(i, k) / pivot;
            for (std::size_t j = k + 1; j < n; ++j) s(i, j) -= l * s(k, j);
        }
    }
    result.positive_definite = true;
    result.min_pivot = min_pivot;
    return result;
}

Matrix solve(const Matrix& m, const Matrix& rhs, double rel_tol) {
    require_square(m, "solve");
    if (rhs.rows() != m.rows()) {
        throw DimensionError("solve: right-hand side " + rhs.shape() + " does not match " + m.shape());
    }
    double scale = 0.0;
    for (double x : m.entries()) scale = std::max(scale, std::abs(x));
    Matrix lu = m;
    const auto perm = lu_factor(lu, rel_tol * scale);
    return lu_solve(lu, perm, rhs);
}

Vector solve(const Matrix& m, std::span<const double> rhs) {
    return solve(m, Matrix::column(rhs)).col(0);
}

}  // namespace observkit
