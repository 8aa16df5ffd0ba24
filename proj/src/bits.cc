#include "synest/bits.h"

#include <algorithm>
#include <sstream>

#include "synest/errors.h"

namespace synest {

namespace {

size_t word_count(size_t bits) { return (bits + 63) / 64; }

void require_same_size(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size()) {
        throw DimensionError(
            "bit vector length mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
}

}  // namespace

BitVector::BitVector(size_t size) : size_(size), words_(word_count(size), 0) {}

BitVector BitVector::from_indices(size_t size, std::span<const size_t> indices) {
    BitVector v(size);
    for (size_t i : indices) {
        if (i >= size) {
            throw DimensionError("index " + std::to_string(i) + " out of range for length " + std::to_string(size));
        }
        v.set(i);
    }
    return v;
}

BitVector BitVector::from_indices(size_t size, std::initializer_list<size_t> indices) {
    return from_indices(size, std::span<const size_t>(indices.begin(), indices.size()));
}

BitVector BitVector::from_string(std::string_view text) {
    BitVector v(text.size());
    for (size_t i = 0; i < text.size(); i++) {
        if (text[i] == '1') {
            v.set(i);
        } else if (text[i] != '0') {
            throw ParseError("expected '0' or '1' in bit string, got '" + std::string(1, text[i]) + "'");
        }
    }
    return v;
}

BitVector BitVector::from_mask(size_t size, uint64_t mask) {
    if (size > 64) {
        throw DimensionError("from_mask supports at most 64 bits");
    }
    BitVector v(size);
    if (size > 0) {
        v.words_[0] = size == 64 ? mask : mask & ((uint64_t{1} << size) - 1);
    }
    return v;
}

void BitVector::set(size_t i, bool value) {
    uint64_t bit = uint64_t{1} << (i & 63);
    if (value) {
        words_[i >> 6] |= bit;
    } else {
        words_[i >> 6] &= ~bit;
    }
}

size_t BitVector::weight() const {
    size_t total = 0;
    for (uint64_t w : words_) {
        total += std::popcount(w);
    }
    return total;
}

bool BitVector::any() const {
    return std::any_of(words_.begin(), words_.end(), [](uint64_t w) { return w != 0; });
}

bool BitVector::dot(const BitVector& other) const {
    require_same_size(*this, other);
    uint64_t acc = 0;
    for (size_t k = 0; k < words_.size(); k++) {
        acc ^= words_[k] & other.words_[k];
    }
    return std::popcount(acc) & 1;
}

bool BitVector::is_subset_of(const BitVector& other) const {
    require_same_size(*this, other);
    for (size_t k = 0; k < words_.size(); k++) {
        if (words_[k] & ~other.words_[k]) {
            return false;
        }
    }
    return true;
}

bool BitVector::intersects(const BitVector& other) const {
    require_same_size(*this, other);
    for (size_t k = 0; k < words_.size(); k++) {
        if (words_[k] & other.words_[k]) {
            return true;
        }
    }
    return false;
}

BitVector& BitVector::operator^=(const BitVector& other) {
    require_same_size(*this, other);
    for (size_t k = 0; k < words_.size(); k++) {
        words_[k] ^= other.words_[k];
    }
    return *this;
}

BitVector& BitVector::operator&=(const BitVector& other) {
    require_same_size(*this, other);
    for (size_t k = 0; k < words_.size(); k++) {
        words_[k] &= other.words_[k];
    }
    return *this;
}

BitVector& BitVector::operator|=(const BitVector& other) {
    require_same_size(*this, other);
    for (size_t k = 0; k < words_.size(); k++) {
        words_[k] |= other.words_[k];
    }
    return *this;
}

std::strong_ordering operator<=>(const BitVector& a, const BitVector& b) {
    if (auto c = a.size_ <=> b.size_; c != 0) {
        return c;
    }
    return std::lexicographical_compare_three_way(a.words_.begin(), a.words_.end(), b.words_.begin(), b.words_.end());
}

std::vector<size_t> BitVector::indices() const {
    std::vector<size_t> out;
    for (size_t k = 0; k < words_.size(); k++) {
        uint64_t w = words_[k];
        while (w) {
            out.push_back(k * 64 + std::countr_zero(w));
            w &= w - 1;
        }
    }
    return out;
}

std::string BitVector::to_string() const {
    std::string s(size_, '0');
    for (size_t i = 0; i < size_; i++) {
        if (get(i)) {
            s[i] = '1';
        }
    }
    return s;
}

uint64_t BitVector::to_mask() const {
    if (size_ > 64) {
        throw DimensionError("to_mask supports at most 64 bits");
    }
    return words_.empty() ? 0 : words_[0];
}

BitVector BitVector::concat(const BitVector& tail) const {
    BitVector out(size_ + tail.size_);
    for (size_t i : indices()) {
        out.set(i);
    }
    for (size_t i : tail.indices()) {
        out.set(size_ + i);
    }
    return out;
}

BitVector BitVector::slice(size_t begin, size_t end) const {
    if (begin > end || end > size_) {
        throw DimensionError("invalid slice");
    }
    BitVector out(end - begin);
    for (size_t i = begin; i < end; i++) {
        if (get(i)) {
            out.set(i - begin);
        }
    }
    return out;
}

bool canonical_less(const BitVector& a, const BitVector& b) {
    size_t wa = a.weight();
    size_t wb = b.weight();
    if (wa != wb) {
        return wa < wb;
    }
    // Same cardinality: the first differing position decides, and the set
    // containing it has the smaller index list.
    size_t n = std::min(a.words().size(), b.words().size());
    for (size_t k = 0; k < n; k++) {
        uint64_t diff = a.words()[k] ^ b.words()[k];
        if (diff) {
            uint64_t low = diff & (~diff + 1);
            return (a.words()[k] & low) != 0;
        }
    }
    return a.size() < b.size();
}

size_t BitVectorHash::operator()(const BitVector& v) const {
    uint64_t h = 1469598103934665603ULL ^ v.size();
    for (uint64_t w : v.words()) {
        h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<size_t>(h);
}

BitMatrix::BitMatrix(size_t rows, size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}

BitMatrix BitMatrix::from_rows(std::vector<BitVector> rows, size_t cols) {
    BitMatrix m;
    m.cols_ = rows.empty() ? cols : rows.front().size();
    for (const auto& r : rows) {
        if (r.size() != m.cols_) {
            throw DimensionError("rows of unequal length");
        }
    }
    m.rows_ = std::move(rows);
    return m;
}

BitMatrix BitMatrix::identity(size_t n) {
    BitMatrix m(n, n);
    for (size_t i = 0; i < n; i++) {
        m.set(i, i);
    }
    return m;
}

BitMatrix BitMatrix::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    size_t rows = 0;
    size_t cols = 0;
    if (!(in >> rows >> cols)) {
        throw ParseError("matrix header must be \"rows cols\"");
    }
    BitMatrix m(rows, cols);
    for (size_t r = 0; r < rows; r++) {
        std::string line;
        if (!(in >> line)) {
            throw ParseError("matrix has fewer rows than its header declares");
        }
        if (line.size() != cols) {
            throw ParseError("matrix row " + std::to_string(r) + " has " + std::to_string(line.size()) +
                             " entries, expected " + std::to_string(cols));
        }
        m.rows_[r] = BitVector::from_string(line);
    }
    std::string extra;
    if (in >> extra) {
        throw ParseError("trailing content after matrix rows");
    }
    return m;
}

std::string BitMatrix::to_text() const {
    std::string out = std::to_string(rows()) + " " + std::to_string(cols_) + "\n";
    for (const auto& r : rows_) {
        out += r.to_string();
        out += '\n';
    }
    return out;
}

BitMatrix BitMatrix::transposed() const {
    BitMatrix t(cols_, rows());
    for (size_t r = 0; r < rows(); r++) {
        for (size_t c : rows_[r].indices()) {
            t.set(c, r);
        }
    }
    return t;
}

BitVector BitMatrix::multiply(const BitVector& v) const {
    if (v.size() != cols_) {
        throw DimensionError("matrix-vector product: vector length " + std::to_string(v.size()) +
                             " does not match " + std::to_string(cols_) + " columns");
    }
    BitVector out(rows());
    for (size_t r = 0; r < rows(); r++) {
        if (rows_[r].dot(v)) {
            out.set(r);
        }
    }
    return out;
}

BitVector BitMatrix::combine_rows(const BitVector& coeffs) const {
    if (coeffs.size() != rows()) {
        throw DimensionError("row combination: coefficient length does not match row count");
    }
    BitVector out(cols_);
    for (size_t r : coeffs.indices()) {
        out ^= rows_[r];
    }
    return out;
}

BitMatrix BitMatrix::select_columns(std::span<const size_t> cols) const {
    BitMatrix out(rows(), cols.size());
    for (size_t r = 0; r < rows(); r++) {
        for (size_t k = 0; k < cols.size(); k++) {
            if (cols[k] >= cols_) {
                throw DimensionError("column index out of range");
            }
            if (rows_[r].get(cols[k])) {
                out.set(r, k);
            }
        }
    }
    return out;
}

BitMatrix BitMatrix::hconcat(const BitMatrix& right) const {
    if (rows() != right.rows()) {
        throw DimensionError("hconcat: row counts differ");
    }
    std::vector<BitVector> out;
    out.reserve(rows());
    for (size_t r = 0; r < rows(); r++) {
        out.push_back(rows_[r].concat(right.rows_[r]));
    }
    return from_rows(std::move(out), cols_ + right.cols_);
}

namespace {

// Reduced row echelon form with leftmost-pivot, topmost-row selection.
// Returns the pivot column of each nonzero row, in row order.
std::vector<size_t> rref_in_place(std::vector<BitVector>& rows, size_t cols) {
    std::vector<size_t> pivots;
    size_t next = 0;
    for (size_t c = 0; c < cols && next < rows.size(); c++) {
        size_t p = next;
        while (p < rows.size() && !rows[p].get(c)) {
            p++;
        }
        if (p == rows.size()) {
            continue;
        }
        std::swap(rows[next], rows[p]);
        for (size_t r = 0; r < rows.size(); r++) {
            if (r != next && rows[r].get(c)) {
                rows[r] ^= rows[next];
            }
        }
        pivots.push_back(c);
        next++;
    }
    return pivots;
}

}  // namespace

size_t rank(const BitMatrix& m) {
    std::vector<BitVector> rows = m.row_vectors();
    return rref_in_place(rows, m.cols()).size();
}

std::vector<size_t> independent_rows(const BitMatrix& m) {
    RowSpace space(m.cols());
    std::vector<size_t> kept;
    for (size_t r = 0; r < m.rows(); r++) {
        if (space.insert(m.row(r))) {
            kept.push_back(r);
        }
    }
    return kept;
}

std::vector<SpanElement> enumerate_span(const BitMatrix& m, size_t max_rank) {
    std::vector<size_t> basis = independent_rows(m);
    if (basis.size() > max_rank) {
        throw CapExceededError("row span of rank " + std::to_string(basis.size()) + " exceeds enumeration cap 2^" +
                               std::to_string(max_rank));
    }
    size_t count = size_t{1} << basis.size();
    std::vector<SpanElement> out;
    out.reserve(count);
    out.push_back({BitVector(m.rows()), BitVector(m.cols())});
    for (size_t k = 1; k < count; k++) {
        const SpanElement& prev = out[k & (k - 1)];
        size_t j = basis[std::countr_zero(k)];
        SpanElement e = prev;
        e.coeffs.flip(j);
        e.value ^= m.row(j);
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<BitVector> row_span(const BitMatrix& m, size_t max_rank) {
    std::vector<BitVector> out;
    for (auto& e : enumerate_span(m, max_rank)) {
        out.push_back(std::move(e.value));
    }
    return out;
}

std::vector<BitVector> nullspace(const BitMatrix& m) {
    std::vector<BitVector> rows = m.row_vectors();
    std::vector<size_t> pivots = rref_in_place(rows, m.cols());
    std::vector<bool> is_pivot(m.cols(), false);
    for (size_t c : pivots) {
        is_pivot[c] = true;
    }
    std::vector<BitVector> basis;
    for (size_t f = 0; f < m.cols(); f++) {
        if (is_pivot[f]) {
            continue;
        }
        BitVector v(m.cols());
        v.set(f);
        for (size_t r = 0; r < pivots.size(); r++) {
            if (rows[r].get(f)) {
                v.set(pivots[r]);
            }
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

bool columns_independent(const BitMatrix& m, std::span<const size_t> cols) {
    if (cols.empty()) {
        return true;
    }
    if (cols.size() > m.rows()) {
        return false;
    }
    return rank(m.select_columns(cols)) == cols.size();
}

RowSpace::RowSpace(const BitMatrix& m) : cols_(m.cols()) {
    for (const auto& r : m.row_vectors()) {
        insert(r);
    }
}

BitVector RowSpace::reduce(BitVector v) const {
    for (size_t k = 0; k < basis_.size(); k++) {
        if (v.get(pivots_[k])) {
            v ^= basis_[k];
        }
    }
    return v;
}

bool RowSpace::insert(const BitVector& v) {
    if (v.size() != cols_) {
        throw DimensionError("row space insert: length mismatch");
    }
    BitVector r = reduce(v);
    if (r.none()) {
        return false;
    }
    pivots_.push_back(r.indices().front());
    basis_.push_back(std::move(r));
    return true;
}

bool RowSpace::contains(const BitVector& v) const {
    if (v.size() != cols_) {
        throw DimensionError("row space membership: length mismatch");
    }
    return reduce(v).none();
}

}  // namespace synest
