#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "synest/bits.h"
#include "synest/pauli.h"

namespace synest {

enum class CodeKind { classical, stabilizer, data_syndrome };

std::string_view to_string(CodeKind kind);
CodeKind parse_code_kind(std::string_view text);

/// Classical, stabilizer and data-syndrome codes behind one interface.
///
/// Every code lives on a Layout. A classical code on n bits uses n classical
/// coordinates and no qubits, so the bar operation is the identity and the
/// quantum formulas reduce to the classical ones. The check matrix has one
/// row per measured parity: H for classical codes, generators in phase space
/// for stabilizer codes, and H_DS = [F | I_m] for data-syndrome codes. The
/// syndrome of an error e is check * bar(e).
class Code {
   public:
    static Code classical(BitMatrix parity_check, std::string name = "classical");
    /// Generator rows are phase-space vectors of length 2n; they must commute.
    static Code stabilizer(BitMatrix generators, std::string name = "stabilizer");
    static Code stabilizer(std::span<const std::string> generators, std::string name = "stabilizer");
    /// check must have the block form [F | I_m] with F of width 2n.
    static Code data_syndrome(size_t qubits, BitMatrix check, std::string name = "data_syndrome");

    CodeKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const Layout& layout() const { return layout_; }
    /// Bits of a classical code, qubits otherwise.
    size_t n() const { return kind_ == CodeKind::classical ? layout_.extra : layout_.qubits; }
    /// Measurement bits of a data-syndrome code, zero otherwise.
    size_t m() const { return kind_ == CodeKind::data_syndrome ? layout_.extra : 0; }
    size_t ambient_size() const { return layout_.size(); }
    const BitMatrix& check() const { return check_; }
    size_t check_rows() const { return check_.rows(); }

    /// Generators of the underlying stabilizer group S over the 2n data
    /// coordinates (empty for classical codes).
    const BitMatrix& stabilizer_generators() const { return stabilizer_; }

    /// Rank of check, i.e. log2 of the size of its row span.
    size_t group_rank() const { return group_rank_; }

    /// check * bar(e).
    BitVector syndrome(const BitVector& e) const;
    BitVector syndrome(const PhaseSpaceVector& e) const { return syndrome(e.bits()); }
    /// Matrix with syndrome(e) = syndrome_matrix() * e; its column j is the
    /// syndrome of the single-coordinate error {j}.
    const BitMatrix& syndrome_matrix() const { return syndrome_matrix_; }

    /// True when e has zero measurement part and a data part in S.
    bool is_stabilizer_element(const BitVector& e) const;

   private:
    Code(CodeKind kind, Layout layout, BitMatrix check, BitMatrix stabilizer, std::string name);

    CodeKind kind_;
    Layout layout_;
    BitMatrix check_;
    BitMatrix stabilizer_;
    BitMatrix syndrome_matrix_;
    RowSpace stabilizer_space_;
    size_t group_rank_ = 0;
    std::string name_;
};

/// Data-syndrome extension: measures f^(i) = sum_j G_C[j, i] g^(j) for the
/// systematic generator matrix G_C = [I_l | extra_columns].
Code build_data_syndrome(const Code& base, const BitMatrix& extra_columns);

struct DistanceSearch {
    size_t max_weight = 6;
    /// Ceiling on candidate errors examined at a single weight.
    uint64_t max_candidates = 2'000'000'000ULL;
};

struct DistanceResult {
    /// Set when an error of weight <= searched_weight was found.
    std::optional<size_t> value;
    /// All errors up to this Pauli weight were examined. When value is empty,
    /// the true distance is at least searched_weight + 1.
    size_t searched_weight = 0;
    std::optional<BitVector> witness;

    size_t lower_bound() const { return value ? *value : searched_weight + 1; }
};

/// Minimal Pauli weight of a zero-syndrome error that is not of the form
/// (h, 0) with h in S.
DistanceResult distance(const Code& code, const DistanceSearch& search = {});
/// Minimal Pauli weight of any nonzero zero-syndrome error.
DistanceResult pure_distance(const Code& code, const DistanceSearch& search = {});

/// True iff syndrome(e) != 0 for every nonzero e supported inside support.
bool is_detectable_support(const Code& code, const BitVector& support);
/// A nonzero zero-syndrome error inside support, if one exists.
std::optional<BitVector> undetectable_error_in(const Code& code, const BitVector& support);

Code repetition_code(size_t n);
Code hamming74_code();
Code five_qubit_code();
Code steane_code();
/// L x L periodic lattice, qubits on edges, X stars and Z plaquettes with one
/// redundant generator of each type dropped.
Code toric_code(size_t L);

struct CatalogParams {
    size_t n = 3;
    size_t L = 3;
};

/// name in {repetition, hamming74, five_qubit, steane, toric}.
Code catalog_code(std::string_view name, const CatalogParams& params = {});

/// Text format: header "kind n m", then the check matrix in BitMatrix text
/// format. Stabilizer codes may instead list one Pauli string per line.
Code parse_code(std::string_view text);
std::string format_code(const Code& code);

}  // namespace synest
