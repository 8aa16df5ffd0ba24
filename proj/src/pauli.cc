#include "synest/pauli.h"

#include "synest/errors.h"

namespace synest {

BitVector Layout::site_support(size_t site) const {
    BitVector v(size());
    if (site < qubits) {
        v.set(x_bit(site));
        v.set(z_bit(site));
    } else if (site < sites()) {
        v.set(extra_bit(site - qubits));
    } else {
        throw DimensionError("site index out of range");
    }
    return v;
}

BitVector Layout::bar(const BitVector& v) const {
    if (v.size() != size()) {
        throw DimensionError("bar: vector length " + std::to_string(v.size()) + " does not match layout size " +
                             std::to_string(size()));
    }
    if (qubits == 0) {
        return v;
    }
    BitVector out(size());
    for (size_t i : v.indices()) {
        if (i < qubits) {
            out.set(i + qubits);
        } else if (i < 2 * qubits) {
            out.set(i - qubits);
        } else {
            out.set(i);
        }
    }
    return out;
}

size_t Layout::pauli_weight(const BitVector& v) const {
    if (v.size() != size()) {
        throw DimensionError("pauli_weight: length mismatch");
    }
    size_t w = 0;
    for (size_t q = 0; q < qubits; q++) {
        if (v.get(x_bit(q)) || v.get(z_bit(q))) {
            w++;
        }
    }
    for (size_t j = 0; j < extra; j++) {
        w += v.get(extra_bit(j));
    }
    return w;
}

bool Layout::symplectic(const BitVector& a, const BitVector& b) const {
    return bar(a).dot(b);
}

PhaseSpaceVector::PhaseSpaceVector(Layout layout, BitVector bits) : layout_(layout), bits_(std::move(bits)) {
    if (bits_.size() != layout_.size()) {
        throw DimensionError("phase space vector length " + std::to_string(bits_.size()) +
                             " does not match 2n+m = " + std::to_string(layout_.size()));
    }
}

char PhaseSpaceVector::letter(size_t q) const {
    bool x = bits_.get(layout_.x_bit(q));
    bool z = bits_.get(layout_.z_bit(q));
    return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
}

PhaseSpaceVector& PhaseSpaceVector::operator+=(const PhaseSpaceVector& other) {
    if (layout_ != other.layout_) {
        throw DimensionError("phase space vectors have different (n, m)");
    }
    bits_ ^= other.bits_;
    return *this;
}

std::string PhaseSpaceVector::to_string() const {
    std::string s;
    for (size_t q = 0; q < layout_.qubits; q++) {
        s += letter(q);
    }
    if (layout_.extra > 0) {
        s += '|';
        s += meas().to_string();
    }
    return s;
}

PhaseSpaceVector encode_pauli(std::string_view letters, const BitVector& meas) {
    Layout layout{letters.size(), meas.size()};
    BitVector bits(layout.size());
    for (size_t q = 0; q < letters.size(); q++) {
        switch (letters[q]) {
            case 'I':
                break;
            case 'X':
                bits.set(layout.x_bit(q));
                break;
            case 'Z':
                bits.set(layout.z_bit(q));
                break;
            case 'Y':
                bits.set(layout.x_bit(q));
                bits.set(layout.z_bit(q));
                break;
            default:
                throw ParseError("invalid Pauli letter '" + std::string(1, letters[q]) + "'");
        }
    }
    for (size_t j : meas.indices()) {
        bits.set(layout.extra_bit(j));
    }
    return PhaseSpaceVector(layout, std::move(bits));
}

PhaseSpaceVector parse_pauli(std::string_view text) {
    size_t bar_pos = text.find('|');
    if (bar_pos == std::string_view::npos) {
        return encode_pauli(text);
    }
    return encode_pauli(text.substr(0, bar_pos), BitVector::from_string(text.substr(bar_pos + 1)));
}

PhaseSpaceVector bar(const PhaseSpaceVector& e) { return PhaseSpaceVector(e.layout(), e.layout().bar(e.bits())); }

bool symplectic_product(const PhaseSpaceVector& a, const PhaseSpaceVector& b) {
    if (a.layout() != b.layout()) {
        throw DimensionError("symplectic product: operands have different (n, m)");
    }
    return a.layout().symplectic(a.bits(), b.bits());
}

size_t pauli_weight(const PhaseSpaceVector& e) { return e.layout().pauli_weight(e.bits()); }

}  // namespace synest
