#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "synest/bits.h"
#include "synest/pauli.h"

namespace synest {

/// Largest domain (in bits) for dense transforms.
inline constexpr size_t kMaxDenseBits = 24;

/// Real function on F_2^k stored densely; point e is the integer whose bit i
/// is coordinate i.
class DenseFunction {
   public:
    DenseFunction() = default;
    explicit DenseFunction(size_t bits);
    DenseFunction(size_t bits, std::vector<double> values);

    static DenseFunction point_mass(size_t bits, uint64_t at = 0);
    static DenseFunction uniform(size_t bits);

    size_t bits() const { return bits_; }
    size_t size() const { return values_.size(); }
    double operator[](uint64_t e) const { return values_[e]; }
    double& operator[](uint64_t e) { return values_[e]; }
    const std::vector<double>& values() const { return values_; }

    double sum() const;
    /// Non-negative entries summing to one within tol.
    bool is_distribution(double tol = 1e-12) const;

   private:
    size_t bits_ = 0;
    std::vector<double> values_;
};

/// g(s) = sum_e f(e) (-1)^(s.e), computed with the fast Walsh-Hadamard
/// butterfly.
DenseFunction fourier_transform(const DenseFunction& f);
/// f(e) = 2^-k sum_s g(s) (-1)^(s.e).
DenseFunction inverse_fourier_transform(const DenseFunction& g);
/// (f * g)(e) = sum_e' f(e') g(e + e').
DenseFunction convolve(const DenseFunction& f, const DenseFunction& g);

/// sum_e (-1)^(a.e) P(e), or with twist sum_e (-1)^<a,e> P(e) = P~(bar a).
/// The layout supplies the bar map; dist.bits() must equal layout.size().
double moment(const DenseFunction& dist, const Layout& layout, const BitVector& a, bool twist);

/// Moments or transformed moments keyed by coordinate subsets. Entries are
/// stored only for requested labels; the empty label is implicitly 1.
class MomentTable {
   public:
    using Map = std::map<BitVector, double, CanonicalLess>;

    MomentTable() = default;
    explicit MomentTable(size_t ambient) : ambient_(ambient) {}

    size_t ambient() const { return ambient_; }
    void set(const BitVector& label, double value);
    bool contains(const BitVector& label) const;
    std::optional<double> find(const BitVector& label) const;
    /// Throws when absent (the empty label returns 1).
    double at(const BitVector& label) const;
    size_t size() const { return entries_.size(); }
    const Map& entries() const { return entries_; }

   private:
    size_t ambient_ = 0;
    Map entries_;
};

/// All subsets of s, including the empty set and s itself.
std::vector<BitVector> subsets_of(const BitVector& s);
/// All nonempty subsets of s.
std::vector<BitVector> nonempty_subsets_of(const BitVector& s);

struct Tolerance {
    double absolute = 1e-12;
    double relative = 1e-10;
};

/// F(a) = prod_{b subset of a} E(b)^((-1)^(|a|+|b|)). Throws
/// SingularMomentError if any E(b) vanishes within tol.absolute, or a
/// missing-entry Error if E(b) is not present.
double inclusion_exclusion_transform(const MomentTable& moments, const BitVector& a, const Tolerance& tol = {});

/// E(a) = prod_{b subset of a} F(b); every nonempty subset of a must be
/// present.
double moebius_inverse(const MomentTable& transformed, const BitVector& a);

bool approx_equal(double x, double y, const Tolerance& tol = {});

}  // namespace synest
