#pragma once

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "observkit/error.hpp"

namespace observkit {

using Vector = std::vector<double>;

/**
 * @brief Dense real matrix stored row-major.
 *
 * Constructors reject non-finite entries. Results of arithmetic are not
 * re-validated; kernels that can overflow (expm) check their own output.
 */
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
    static Matrix diagonal(std::span<const double> d);
    static Matrix column(std::span<const double> v);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<const double> entries() const noexcept { return data_; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const {
        return std::span<const double>(data_).subspan(i * cols_, cols_);
    }
    [[nodiscard]] Vector col(std::size_t j) const;

    [[nodiscard]] std::string shape() const;

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(double s);

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);
Matrix matmul(const Matrix& a, const Matrix& b);
Vector matvec(const Matrix& a, std::span<const double> x);

/// Horizontal concatenation [a | b]; row counts must agree.
Matrix hstack(const Matrix& a, const Matrix& b);

double norm_1(const Matrix& m);
double norm_frobenius(const Matrix& m);
double max_abs_diff(const Matrix& a, const Matrix& b);
double trace(const Matrix& m);

/// (m + mᵀ) / 2
Matrix symmetrize(const Matrix& m);

/**
 * @brief e^{a t} by scaling and squaring with a degree-6 diagonal Padé approximant.
 *
 * The scaling exponent s is chosen so that ‖a t / 2ˢ‖₁ ≤ 1/2, where the
 * degree-6 approximant's relative backward error is below 4e-16.
 */
Matrix expm(const Matrix& a, double t = 1.0);

/// Singular values in descending order (one-sided Jacobi).
Vector singular_values(const Matrix& m);

inline double default_rank_tol(const Matrix& m) {
    const auto dim = m.rows() > m.cols() ? m.rows() : m.cols();
    return std::numeric_limits<double>::epsilon() * static_cast<double>(dim == 0 ? 1 : dim);
}

/// Number of singular values greater than rel_tol × σ_max.
std::size_t rank(const Matrix& m, double rel_tol);
inline std::size_t rank(const Matrix& m) { return rank(m, default_rank_tol(m)); }

/// σ_max / σ_min; infinity when σ_min is zero.
double condition_number(const Matrix& m);

struct DefinitenessResult {
    bool positive_definite = false;
    /// Smallest pivot of the diagonally pivoted LDLᵀ factorization, or the first
    /// pivot that fell below the threshold.
    double min_pivot = 0.0;
    /// tol × max |diag|
    double threshold = 0.0;
};

inline constexpr double kDefaultPdTol = 1e-10;

/**
 * Pivoted symmetric factorization of (m + mᵀ)/2. Every pivot must exceed
 * tol × max|diag| for a positive verdict.
 */
DefinitenessResult check_positive_definite(const Matrix& m, double tol = kDefaultPdTol);
inline bool is_positive_definite(const Matrix& m, double tol = kDefaultPdTol) {
    return check_positive_definite(m, tol).positive_definite;
}

/**
 * @brief Solve m x = rhs by LU with partial pivoting.
 *
 * Throws SingularMatrixError when a pivot is at most rel_tol × max|m|.
 */
Matrix solve(const Matrix& m, const Matrix& rhs, double rel_tol);
inline Matrix solve(const Matrix& m, const Matrix& rhs) { return solve(m, rhs, default_rank_tol(m)); }
Vector solve(const Matrix& m, std::span<const double> rhs);

}  // namespace observkit
