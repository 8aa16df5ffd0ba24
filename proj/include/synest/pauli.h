#pragma once

#include <string>
#include <string_view>

#include "synest/bits.h"

namespace synest {

/// Coordinate layout of the phase space F_2^(2n+m): x-bits of the n qubits,
/// then their z-bits, then m classical bits (measurement bits of a
/// data-syndrome code, or the bits of a classical code with n = 0). Every
/// module indexes coordinates through this layout.
struct Layout {
    size_t qubits = 0;
    size_t extra = 0;

    size_t size() const { return 2 * qubits + extra; }
    size_t x_bit(size_t q) const { return q; }
    size_t z_bit(size_t q) const { return qubits + q; }
    size_t extra_bit(size_t j) const { return 2 * qubits + j; }
    /// Number of weight-carrying sites: qubits plus classical bits.
    size_t sites() const { return qubits + extra; }
    /// Phase-space coordinates belonging to a site (two for a qubit, one for a
    /// classical bit).
    BitVector site_support(size_t site) const;

    /// Swaps x- and z-bits of the data part; classical bits are untouched.
    BitVector bar(const BitVector& v) const;
    size_t pauli_weight(const BitVector& v) const;
    /// bar(a) . b, the symplectic form extended by the dot product on the
    /// classical bits.
    bool symplectic(const BitVector& a, const BitVector& b) const;

    friend bool operator==(const Layout&, const Layout&) = default;
};

/// A Pauli error (phase discarded) together with measurement-bit flips.
class PhaseSpaceVector {
   public:
    PhaseSpaceVector() = default;
    PhaseSpaceVector(Layout layout, BitVector bits);
    explicit PhaseSpaceVector(Layout layout) : PhaseSpaceVector(layout, BitVector(layout.size())) {}

    const Layout& layout() const { return layout_; }
    const BitVector& bits() const { return bits_; }
    size_t qubits() const { return layout_.qubits; }
    size_t measurements() const { return layout_.extra; }

    BitVector data_x() const { return bits_.slice(0, layout_.qubits); }
    BitVector data_z() const { return bits_.slice(layout_.qubits, 2 * layout_.qubits); }
    BitVector meas() const { return bits_.slice(2 * layout_.qubits, layout_.size()); }

    /// Letter I, X, Y or Z acting on qubit q.
    char letter(size_t q) const;

    PhaseSpaceVector& operator+=(const PhaseSpaceVector& other);
    friend PhaseSpaceVector operator+(PhaseSpaceVector a, const PhaseSpaceVector& b) { return a += b; }
    friend bool operator==(const PhaseSpaceVector&, const PhaseSpaceVector&) = default;

    /// "XIZY" or "XIZY|01".
    std::string to_string() const;

   private:
    Layout layout_;
    BitVector bits_;
};

/// Maps letters over {I,X,Y,Z} to phase space with X -> (1,0), Z -> (0,1),
/// Y -> (1,1); measurement bits are appended unchanged.
PhaseSpaceVector encode_pauli(std::string_view letters, const BitVector& meas = BitVector());

/// Parses the text form "XIZY" or "XIZY|01".
PhaseSpaceVector parse_pauli(std::string_view text);

PhaseSpaceVector bar(const PhaseSpaceVector& e);
bool symplectic_product(const PhaseSpaceVector& a, const PhaseSpaceVector& b);
size_t pauli_weight(const PhaseSpaceVector& e);

}  // namespace synest
