#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "synest/bits.h"
#include "synest/code.h"
#include "synest/exact.h"
#include "synest/pauli.h"

namespace synest {

/// Order of the nonzero group elements that label the rows of D.
enum class RowOrder {
    /// Binary counting over generator coefficients, first generator least
    /// significant (the enumerate_span order).
    span,
    /// By number of generators combined, then lexicographically by the list
    /// of generator indices: g1, g2, ..., g1+g2, g1+g3, ...
    combination,
};

/// The linear system log E(s) = sum_{b subset of s} log F(b).
///
/// Rows are group elements s (phase-space vectors of the code's layout,
/// i.e. combinations of check rows); columns are labels b from the barred
/// closure of the channel supports.
struct MomentSystem {
    Layout layout;
    /// Coefficients of each row over the code's check rows.
    std::vector<BitVector> row_coeffs;
    std::vector<BitVector> row_labels;
    std::vector<BitVector> col_labels;
    /// D[r, c] = [col_labels[c] subset of row_labels[r]].
    BitMatrix d;
    /// 2^rank(check).
    uint64_t group_size = 0;
    /// True when every nonzero group element is a row.
    bool full_group = false;

    size_t rows() const { return row_labels.size(); }
    size_t cols() const { return col_labels.size(); }
};

/// D over every nonzero element of the group generated by the check rows.
MomentSystem build_coefficient_matrix(const Code& code, const std::vector<BitVector>& barred_closure,
                                      RowOrder order = RowOrder::combination,
                                      size_t max_rank = kDefaultSpanRankCap);

/// D over a chosen set of group elements, given by coefficient vectors over
/// the check rows. Zero and repeated elements are dropped.
MomentSystem build_coefficient_matrix_from_rows(const Code& code, const std::vector<BitVector>& barred_closure,
                                                const std::vector<BitVector>& row_coeffs);

/// (D^T D)[a, b] as counts.
std::vector<int64_t> gram_counts(const MomentSystem& ms);

struct RescaledGram {
    /// 2^(|a|+|b|) (D^T D)[a, b] / group_size.
    RationalMatrix values;
    /// All entries are integers.
    bool integral = true;
    /// Entries equal 2^|a cap b| throughout.
    bool matches_intersection = true;
    /// (row, col) of the first entry that is non-integral or differs from
    /// 2^|a cap b|.
    std::optional<std::pair<size_t, size_t>> first_mismatch;
};

/// Requires a full-group system.
RescaledGram rescaled_gram(const MomentSystem& ms);

/// Subsets of [n] of size 1..t, ordered by size then lexicographically, with
/// entries 2^|a cap b|.
class IntersectionMatrix {
   public:
    static constexpr size_t kMaxDimension = 5000;

    IntersectionMatrix(size_t n, size_t t);

    size_t n() const { return n_; }
    size_t t() const { return t_; }
    size_t dimension() const { return labels_.size(); }
    /// Labels as bit masks over [n].
    const std::vector<uint64_t>& labels() const { return labels_; }
    /// Number of labels of size at most k (alpha_k - 1).
    size_t count_up_to(size_t k) const;
    int64_t entry(size_t i, size_t j) const;
    std::vector<int64_t> entries() const;
    RationalMatrix matrix() const;

   private:
    size_t n_;
    size_t t_;
    std::vector<uint64_t> labels_;
};

/// alpha_i = sum_{k <= i} C(n, k).
Integer lemma_alpha(size_t n, size_t i);
/// f^(i)(x) = sum_{k = i}^{x} C(x, k).
Integer lemma_f(size_t i, size_t x);
/// u^(i)(w, w') = C(w - 1, i) C(w' - 1, i) / alpha_i.
Rational lemma_u(size_t n, size_t i, size_t w, size_t w2);
/// Closed form for the stage-i matrix of the Schur chain:
/// f^(i+1)(|a cap b|) + u^(i)(|a|, |b|).
Rational lemma7_entry(size_t n, size_t i, uint64_t a, uint64_t b);

/// Stage i (for i = 0..t-1) is the matrix over labels of size > i obtained
/// from stage i-1 by taking the Schur complement of its leading block of
/// size-i labels. Stage 0 is M_t itself; the last stage is M_t / M_{t-1}.
std::vector<RationalMatrix> schur_chain(const IntersectionMatrix& m);

struct RankCertificate {
    bool full_rank = false;
    size_t rank = 0;
    size_t columns = 0;
    /// "exact": fraction-free rank of the integer matrix D^T D. "float" is
    /// reported only if exact elimination was skipped.
    std::string method;
    /// The rescaled Gram equals 2^|a cap b| entrywise, i.e. a principal
    /// submatrix of a positive-definite intersection matrix, which certifies
    /// full rank independently of the elimination.
    bool intersection_certificate = false;
    /// Rows are a subset of the group, so the certificate covers that subset
    /// only.
    bool partial = false;
    std::string detail;
    /// Numerical rank from a rank-revealing QR, used as a pre-check.
    size_t float_rank = 0;
};

RankCertificate certify_full_rank(const MomentSystem& ms);

struct IdentifiabilityWitness {
    BitVector gamma1;
    BitVector gamma2;
    /// Nonzero error of zero syndrome inside gamma1 | gamma2.
    BitVector error;
    size_t pauli_weight = 0;
    bool is_stabilizer = false;
};

struct Verdict {
    bool identifiable = true;
    std::optional<IdentifiabilityWitness> witness;
    size_t pairs_checked = 0;
    size_t failing_pairs = 0;
};

/// Identifiable iff gamma1 | gamma2 supports only detectable errors for all
/// pairs of supports (including gamma1 == gamma2). Supports are subsets of
/// the code's error coordinates. When several pairs fail, the witness prefers
/// a pair whose lightest undetectable error is a stabilizer element.
Verdict check_identifiability(const Code& code, const std::vector<BitVector>& supports, size_t threads = 0);

/// The same condition stated on the closure: syn(e1) != 0 for every e1 in
/// the closure, and syn(e1 + e2) != 0 for all distinct e1, e2 in it.
bool check_equivalent_condition(const Code& code, const std::vector<BitVector>& supports);

/// Pattern counts of the group elements restricted to coordinate subsets.
/// Column bitsets over all group elements are precomputed once so many
/// subsets can be checked cheaply.
class OrthogonalArrayChecker {
   public:
    explicit OrthogonalArrayChecker(const Code& code, size_t max_rank = kDefaultSpanRankCap);

    size_t group_rank() const { return rank_; }
    uint64_t group_size() const { return uint64_t{1} << rank_; }
    /// counts[p] = number of elements whose restriction to gamma has bit j of
    /// p equal to coordinate gamma[j].
    std::vector<uint64_t> pattern_counts(const std::vector<size_t>& gamma) const;
    /// All counts equal 2^(rank - |gamma|).
    bool is_uniform(const std::vector<size_t>& gamma) const;

   private:
    size_t rank_;
    size_t words_;
    std::vector<std::vector<uint64_t>> columns_;
};

bool orthogonal_array_check(const Code& code, const BitVector& gamma);

/// Basis of the F_2 nullspace of D, as vectors over the columns.
std::vector<BitVector> sign_symmetries(const MomentSystem& ms);

}  // namespace synest
