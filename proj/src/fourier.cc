#include "synest/fourier.h"

#include <cmath>
#include <numeric>

#include "synest/errors.h"

namespace synest {

namespace {

void require_dense_cap(size_t bits) {
    if (bits > kMaxDenseBits) {
        throw CapExceededError("dense function on " + std::to_string(bits) + " bits exceeds cap of " +
                               std::to_string(kMaxDenseBits));
    }
}

void walsh_hadamard(std::vector<double>& v) {
    for (size_t h = 1; h < v.size(); h <<= 1) {
        for (size_t i = 0; i < v.size(); i += 2 * h) {
            for (size_t j = i; j < i + h; j++) {
                double a = v[j];
                double b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
    }
}

}  // namespace

DenseFunction::DenseFunction(size_t bits) : bits_(bits) {
    require_dense_cap(bits);
    values_.assign(size_t{1} << bits, 0.0);
}

DenseFunction::DenseFunction(size_t bits, std::vector<double> values) : bits_(bits), values_(std::move(values)) {
    require_dense_cap(bits);
    if (values_.size() != (size_t{1} << bits)) {
        throw DimensionError("dense function on " + std::to_string(bits) + " bits needs " +
                             std::to_string(size_t{1} << bits) + " values, got " + std::to_string(values_.size()));
    }
}

DenseFunction DenseFunction::point_mass(size_t bits, uint64_t at) {
    DenseFunction f(bits);
    f[at] = 1.0;
    return f;
}

DenseFunction DenseFunction::uniform(size_t bits) {
    DenseFunction f(bits);
    double p = 1.0 / static_cast<double>(f.size());
    std::fill(f.values_.begin(), f.values_.end(), p);
    return f;
}

double DenseFunction::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

bool DenseFunction::is_distribution(double tol) const {
    for (double v : values_) {
        if (v < -tol) {
            return false;
        }
    }
    return std::abs(sum() - 1.0) <= tol;
}

DenseFunction fourier_transform(const DenseFunction& f) {
    std::vector<double> v = f.values();
    walsh_hadamard(v);
    return DenseFunction(f.bits(), std::move(v));
}

DenseFunction inverse_fourier_transform(const DenseFunction& g) {
    std::vector<double> v = g.values();
    walsh_hadamard(v);
    double scale = 1.0 / static_cast<double>(v.size());
    for (double& x : v) {
        x *= scale;
    }
    return DenseFunction(g.bits(), std::move(v));
}

DenseFunction convolve(const DenseFunction& f, const DenseFunction& g) {
    if (f.bits() != g.bits()) {
        throw DimensionError("convolution of functions on different domains");
    }
    DenseFunction out(f.bits());
    // Iterating over the nonzero entries of g keeps channel convolutions
    // proportional to the size of the channel's support.
    for (uint64_t d = 0; d < g.size(); d++) {
        double gd = g[d];
        if (gd == 0.0) {
            continue;
        }
        for (uint64_t e = 0; e < f.size(); e++) {
            out[e ^ d] += f[e] * gd;
        }
    }
    return out;
}

double moment(const DenseFunction& dist, const Layout& layout, const BitVector& a, bool twist) {
    if (dist.bits() != layout.size() || a.size() != layout.size()) {
        throw DimensionError("moment: label, layout and distribution sizes disagree");
    }
    uint64_t mask = (twist ? layout.bar(a) : a).to_mask();
    double total = 0.0;
    for (uint64_t e = 0; e < dist.size(); e++) {
        double p = dist[e];
        total += (std::popcount(mask & e) & 1) ? -p : p;
    }
    return total;
}

void MomentTable::set(const BitVector& label, double value) {
    if (label.size() != ambient_) {
        throw DimensionError("moment label length does not match table");
    }
    entries_[label] = value;
}

bool MomentTable::contains(const BitVector& label) const { return entries_.count(label) > 0; }

std::optional<double> MomentTable::find(const BitVector& label) const {
    auto it = entries_.find(label);
    if (it == entries_.end()) {
        if (label.none()) {
            return 1.0;
        }
        return std::nullopt;
    }
    return it->second;
}

double MomentTable::at(const BitVector& label) const {
    if (auto v = find(label)) {
        return *v;
    }
    throw Error("moment table has no entry for subset " + label.to_string());
}

std::vector<BitVector> subsets_of(const BitVector& s) {
    std::vector<size_t> idx = s.indices();
    if (idx.size() >= 32) {
        throw CapExceededError("subset enumeration of a set with " + std::to_string(idx.size()) + " elements");
    }
    std::vector<BitVector> out;
    out.reserve(size_t{1} << idx.size());
    for (uint64_t k = 0; k < (uint64_t{1} << idx.size()); k++) {
        BitVector b(s.size());
        for (size_t j = 0; j < idx.size(); j++) {
            if ((k >> j) & 1) {
                b.set(idx[j]);
            }
        }
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<BitVector> nonempty_subsets_of(const BitVector& s) {
    std::vector<BitVector> all = subsets_of(s);
    all.erase(all.begin());
    return all;
}

double inclusion_exclusion_transform(const MomentTable& moments, const BitVector& a, const Tolerance& tol) {
    size_t wa = a.weight();
    double f = 1.0;
    for (const BitVector& b : subsets_of(a)) {
        double e = moments.at(b);
        if (std::abs(e) <= tol.absolute) {
            throw SingularMomentError("moment of subset " + b.to_string() + " vanishes");
        }
        if ((wa + b.weight()) % 2 == 0) {
            f *= e;
        } else {
            f /= e;
        }
    }
    return f;
}

double moebius_inverse(const MomentTable& transformed, const BitVector& a) {
    double e = 1.0;
    for (const BitVector& b : nonempty_subsets_of(a)) {
        e *= transformed.at(b);
    }
    return e;
}

bool approx_equal(double x, double y, const Tolerance& tol) {
    double diff = std::abs(x - y);
    if (std::max(std::abs(x), std::abs(y)) <= 1.0) {
        return diff <= tol.absolute;
    }
    return diff <= tol.relative * std::max(std::abs(x), std::abs(y));
}

}  // namespace synest
