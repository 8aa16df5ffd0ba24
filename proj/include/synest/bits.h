#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace synest {

/// Dense vector over F_2, packed 64 bits per word. Bit i lives in word i/64 at
/// position i%64. Padding bits past size() are always zero.
class BitVector {
   public:
    BitVector() = default;
    explicit BitVector(size_t size);

    static BitVector from_indices(size_t size, std::span<const size_t> indices);
    static BitVector from_indices(size_t size, std::initializer_list<size_t> indices);
    /// Parses a string of '0'/'1' characters.
    static BitVector from_string(std::string_view text);
    /// Low `size` bits of `mask`; size must be at most 64.
    static BitVector from_mask(size_t size, uint64_t mask);

    size_t size() const { return size_; }
    bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i, bool value = true);
    void flip(size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }

    size_t weight() const;
    bool any() const;
    bool none() const { return !any(); }

    /// Parity of the elementwise product.
    bool dot(const BitVector& other) const;
    bool is_subset_of(const BitVector& other) const;
    bool intersects(const BitVector& other) const;

    BitVector& operator^=(const BitVector& other);
    BitVector& operator&=(const BitVector& other);
    BitVector& operator|=(const BitVector& other);
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
    friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }

    friend bool operator==(const BitVector& a, const BitVector& b) = default;
    /// Arbitrary but fixed strict order, suitable for ordered containers. Use
    /// canonical_less for the documented (size, lexicographic) subset order.
    friend std::strong_ordering operator<=>(const BitVector& a, const BitVector& b);

    std::vector<size_t> indices() const;
    std::string to_string() const;
    uint64_t to_mask() const;
    std::span<const uint64_t> words() const { return words_; }
    std::span<uint64_t> words() { return words_; }

    /// Concatenation in order.
    BitVector concat(const BitVector& tail) const;
    BitVector slice(size_t begin, size_t end) const;

   private:
    size_t size_ = 0;
    std::vector<uint64_t> words_;
};

/// Order on subsets: by cardinality, then lexicographically by the sorted
/// index list. This is the label order used for moment-system columns.
bool canonical_less(const BitVector& a, const BitVector& b);

struct CanonicalLess {
    bool operator()(const BitVector& a, const BitVector& b) const { return canonical_less(a, b); }
};

struct BitVectorHash {
    size_t operator()(const BitVector& v) const;
};

/// Dense row-major matrix over F_2.
class BitMatrix {
   public:
    BitMatrix() = default;
    BitMatrix(size_t rows, size_t cols);

    /// All rows must have the same length; `cols` is required when rows is empty.
    static BitMatrix from_rows(std::vector<BitVector> rows, size_t cols = 0);
    static BitMatrix identity(size_t n);

    /// Text format: first line "rows cols", then one line of 0/1 characters
    /// per row.
    static BitMatrix parse(std::string_view text);
    std::string to_text() const;

    size_t rows() const { return rows_.size(); }
    size_t cols() const { return cols_; }
    bool get(size_t r, size_t c) const { return rows_[r].get(c); }
    void set(size_t r, size_t c, bool value = true) { rows_[r].set(c, value); }
    const BitVector& row(size_t r) const { return rows_[r]; }
    BitVector& row(size_t r) { return rows_[r]; }
    const std::vector<BitVector>& row_vectors() const { return rows_; }

    BitMatrix transposed() const;
    /// this * v, with v indexed by columns.
    BitVector multiply(const BitVector& v) const;
    /// coeffs^T * this, i.e. the sum of the rows selected by coeffs.
    BitVector combine_rows(const BitVector& coeffs) const;
    BitMatrix select_columns(std::span<const size_t> cols) const;
    BitMatrix hconcat(const BitMatrix& right) const;

    friend bool operator==(const BitMatrix& a, const BitMatrix& b) = default;

   private:
    size_t cols_ = 0;
    std::vector<BitVector> rows_;
};

/// Default ceiling on the rank of a matrix whose row space is enumerated.
inline constexpr size_t kDefaultSpanRankCap = 24;

size_t rank(const BitMatrix& m);

/// Indices of the rows kept by a top-down greedy scan that skips rows in the
/// span of earlier rows.
std::vector<size_t> independent_rows(const BitMatrix& m);

struct SpanElement {
    /// Coefficients over all rows of the source matrix; rows outside
    /// independent_rows() always have coefficient zero.
    BitVector coeffs;
    BitVector value;
};

/// All 2^rank row-space elements, zero first. Element k combines the
/// independent rows selected by the binary digits of k, first independent
/// row least significant. Throws CapExceededError when rank > max_rank.
std::vector<SpanElement> enumerate_span(const BitMatrix& m, size_t max_rank = kDefaultSpanRankCap);
std::vector<BitVector> row_span(const BitMatrix& m, size_t max_rank = kDefaultSpanRankCap);

/// Basis of {v : m v = 0}, one vector per free column in increasing order.
std::vector<BitVector> nullspace(const BitMatrix& m);

bool columns_independent(const BitMatrix& m, std::span<const size_t> cols);

/// Incremental membership test for a row space.
class RowSpace {
   public:
    RowSpace() = default;
    explicit RowSpace(size_t cols) : cols_(cols) {}
    explicit RowSpace(const BitMatrix& m);

    /// Returns true when v was independent of the current basis.
    bool insert(const BitVector& v);
    bool contains(const BitVector& v) const;
    size_t dimension() const { return basis_.size(); }

   private:
    BitVector reduce(BitVector v) const;

    size_t cols_ = 0;
    std::vector<BitVector> basis_;
    std::vector<size_t> pivots_;
};

}  // namespace synest
