#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace synest {

using Rational = mpq_class;
using Integer = mpz_class;

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
   public:
    RationalMatrix() = default;
    RationalMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static RationalMatrix identity(size_t n);
    static RationalMatrix from_integers(size_t rows, size_t cols, const std::vector<int64_t>& values);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    Rational& at(size_t r, size_t c) { return data_[r * cols_ + c]; }
    const Rational& at(size_t r, size_t c) const { return data_[r * cols_ + c]; }

    RationalMatrix block(size_t row0, size_t col0, size_t rows, size_t cols) const;
    RationalMatrix operator*(const RationalMatrix& other) const;
    RationalMatrix operator-(const RationalMatrix& other) const;
    RationalMatrix operator+(const RationalMatrix& other) const;

    friend bool operator==(const RationalMatrix& a, const RationalMatrix& b);

    std::string to_string() const;

   private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<Rational> data_;
};

/// Exact inverse by Gauss-Jordan elimination; nullopt when singular.
std::optional<RationalMatrix> inverse(const RationalMatrix& m);

/// Rank over Q.
size_t exact_rank(const RationalMatrix& m);

/// Schur complement of the leading k x k block: M22 - M21 M11^-1 M12.
/// Throws Error when the leading block is singular.
RationalMatrix schur_complement(const RationalMatrix& m, size_t k);

/// Leading principal minors det(M[0..k, 0..k]) for k = 1..n, by fraction-free
/// elimination without pivoting. Stops (returning fewer entries) at the first
/// vanishing minor.
std::vector<Integer> leading_principal_minors(size_t n, const std::vector<int64_t>& row_major);

/// Rank over Q of an integer matrix by fraction-free elimination.
size_t integer_rank(size_t rows, size_t cols, const std::vector<int64_t>& row_major);

Integer binomial(int64_t n, int64_t k);

}  // namespace synest
