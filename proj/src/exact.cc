#include "synest/exact.h"

#include <sstream>

#include "synest/errors.h"

namespace synest {

RationalMatrix RationalMatrix::identity(size_t n) {
    RationalMatrix m(n, n);
    for (size_t i = 0; i < n; i++) {
        m.at(i, i) = 1;
    }
    return m;
}

RationalMatrix RationalMatrix::from_integers(size_t rows, size_t cols, const std::vector<int64_t>& values) {
    if (values.size() != rows * cols) {
        throw DimensionError("integer matrix data has the wrong size");
    }
    RationalMatrix m(rows, cols);
    for (size_t k = 0; k < values.size(); k++) {
        m.data_[k] = Rational(static_cast<long>(values[k]));
    }
    return m;
}

RationalMatrix RationalMatrix::block(size_t row0, size_t col0, size_t rows, size_t cols) const {
    if (row0 + rows > rows_ || col0 + cols > cols_) {
        throw DimensionError("block out of range");
    }
    RationalMatrix out(rows, cols);
    for (size_t r = 0; r < rows; r++) {
        for (size_t c = 0; c < cols; c++) {
            out.at(r, c) = at(row0 + r, col0 + c);
        }
    }
    return out;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& other) const {
    if (cols_ != other.rows_) {
        throw DimensionError("matrix product shape mismatch");
    }
    RationalMatrix out(rows_, other.cols_);
    for (size_t r = 0; r < rows_; r++) {
        for (size_t k = 0; k < cols_; k++) {
            const Rational& a = at(r, k);
            if (sgn(a) == 0) {
                continue;
            }
            for (size_t c = 0; c < other.cols_; c++) {
                out.at(r, c) += a * other.at(k, c);
            }
        }
    }
    return out;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw DimensionError("matrix difference shape mismatch");
    }
    RationalMatrix out(rows_, cols_);
    for (size_t k = 0; k < data_.size(); k++) {
        out.data_[k] = data_[k] - other.data_[k];
    }
    return out;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw DimensionError("matrix sum shape mismatch");
    }
    RationalMatrix out(rows_, cols_);
    for (size_t k = 0; k < data_.size(); k++) {
        out.data_[k] = data_[k] + other.data_[k];
    }
    return out;
}

bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string RationalMatrix::to_string() const {
    std::ostringstream out;
    for (size_t r = 0; r < rows_; r++) {
        for (size_t c = 0; c < cols_; c++) {
            out << (c ? " " : "") << at(r, c).get_str();
        }
        out << '\n';
    }
    return out.str();
}

std::optional<RationalMatrix> inverse(const RationalMatrix& m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("inverse of a non-square matrix");
    }
    size_t n = m.rows();
    RationalMatrix a = m;
    RationalMatrix inv = RationalMatrix::identity(n);
    for (size_t c = 0; c < n; c++) {
        size_t p = c;
        while (p < n && sgn(a.at(p, c)) == 0) {
            p++;
        }
        if (p == n) {
            return std::nullopt;
        }
        if (p != c) {
            for (size_t k = 0; k < n; k++) {
                std::swap(a.at(p, k), a.at(c, k));
                std::swap(inv.at(p, k), inv.at(c, k));
            }
        }
        Rational pivot = a.at(c, c);
        for (size_t k = 0; k < n; k++) {
            a.at(c, k) /= pivot;
            inv.at(c, k) /= pivot;
        }
        for (size_t r = 0; r < n; r++) {
            if (r == c || sgn(a.at(r, c)) == 0) {
                continue;
            }
            Rational factor = a.at(r, c);
            for (size_t k = 0; k < n; k++) {
                a.at(r, k) -= factor * a.at(c, k);
                inv.at(r, k) -= factor * inv.at(c, k);
            }
        }
    }
    return inv;
}

size_t exact_rank(const RationalMatrix& m) {
    RationalMatrix a = m;
    size_t rank = 0;
    for (size_t c = 0; c < a.cols() && rank < a.rows(); c++) {
        size_t p = rank;
        while (p < a.rows() && sgn(a.at(p, c)) == 0) {
            p++;
        }
        if (p == a.rows()) {
            continue;
        }
        if (p != rank) {
            for (size_t k = 0; k < a.cols(); k++) {
                std::swap(a.at(p, k), a.at(rank, k));
            }
        }
        for (size_t r = rank + 1; r < a.rows(); r++) {
            if (sgn(a.at(r, c)) == 0) {
                continue;
            }
            Rational factor = a.at(r, c) / a.at(rank, c);
            for (size_t k = c; k < a.cols(); k++) {
                a.at(r, k) -= factor * a.at(rank, k);
            }
        }
        rank++;
    }
    return rank;
}

RationalMatrix schur_complement(const RationalMatrix& m, size_t k) {
    if (m.rows() != m.cols() || k > m.rows()) {
        throw DimensionError("schur complement needs a square matrix and k <= n");
    }
    size_t n = m.rows();
    // Eliminate the leading k variables in place; the trailing block is then
    // M22 - M21 M11^-1 M12.
    RationalMatrix a = m;
    for (size_t c = 0; c < k; c++) {
        if (sgn(a.at(c, c)) == 0) {
            // Pivot within the leading block only, so the complement keeps
            // its meaning.
            size_t p = c + 1;
            while (p < k && sgn(a.at(p, c)) == 0) {
                p++;
            }
            if (p == k) {
                throw Error("leading block of Schur complement is singular");
            }
            for (size_t j = 0; j < n; j++) {
                std::swap(a.at(p, j), a.at(c, j));
            }
        }
        for (size_t r = c + 1; r < n; r++) {
            if (sgn(a.at(r, c)) == 0) {
                continue;
            }
            Rational factor = a.at(r, c) / a.at(c, c);
            for (size_t j = c; j < n; j++) {
                a.at(r, j) -= factor * a.at(c, j);
            }
        }
    }
    return a.block(k, k, n - k, n - k);
}

std::vector<Integer> leading_principal_minors(size_t n, const std::vector<int64_t>& row_major) {
    if (row_major.size() != n * n) {
        throw DimensionError("leading_principal_minors: data size does not match n x n");
    }
    std::vector<Integer> a(row_major.size());
    for (size_t k = 0; k < a.size(); k++) {
        a[k] = static_cast<long>(row_major[k]);
    }
    auto at = [&](size_t r, size_t c) -> Integer& { return a[r * n + c]; };
    std::vector<Integer> minors;
    Integer prev = 1;
    for (size_t k = 0; k < n; k++) {
        if (sgn(at(k, k)) == 0) {
            break;
        }
        minors.push_back(at(k, k));
        for (size_t i = k + 1; i < n; i++) {
            for (size_t j = k + 1; j < n; j++) {
                at(i, j) = (at(k, k) * at(i, j) - at(i, k) * at(k, j)) / prev;
            }
        }
        prev = at(k, k);
    }
    return minors;
}

size_t integer_rank(size_t rows, size_t cols, const std::vector<int64_t>& row_major) {
    if (row_major.size() != rows * cols) {
        throw DimensionError("integer_rank: data size does not match shape");
    }
    std::vector<Integer> a(row_major.size());
    for (size_t k = 0; k < a.size(); k++) {
        a[k] = static_cast<long>(row_major[k]);
    }
    auto at = [&](size_t r, size_t c) -> Integer& { return a[r * cols + c]; };
    size_t rank = 0;
    Integer prev = 1;
    for (size_t c = 0; c < cols && rank < rows; c++) {
        size_t p = rank;
        while (p < rows && sgn(at(p, c)) == 0) {
            p++;
        }
        if (p == rows) {
            continue;
        }
        if (p != rank) {
            for (size_t j = 0; j < cols; j++) {
                std::swap(at(p, j), at(rank, j));
            }
        }
        for (size_t i = rank + 1; i < rows; i++) {
            for (size_t j = c + 1; j < cols; j++) {
                at(i, j) = (at(rank, c) * at(i, j) - at(i, c) * at(rank, j)) / prev;
            }
            at(i, c) = 0;
        }
        prev = at(rank, c);
        rank++;
    }
    return rank;
}

Integer binomial(int64_t n, int64_t k) {
    if (k < 0 || n < 0 || k > n) {
        return 0;
    }
    Integer out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return out;
}

}  // namespace synest
