#include "synest/noise.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "synest/errors.h"

namespace synest {

BitVector Channel::embed(uint64_t local) const {
    BitVector e(mask.size());
    for (size_t j = 0; j < support.size(); j++) {
        if ((local >> j) & 1) {
            e.set(support[j]);
        }
    }
    return e;
}

uint64_t Channel::restrict(const BitVector& label) const {
    uint64_t local = 0;
    for (size_t j = 0; j < support.size(); j++) {
        if (label.get(support[j])) {
            local |= uint64_t{1} << j;
        }
    }
    return local;
}

double Channel::character(uint64_t local_label) const {
    double total = 0.0;
    for (uint64_t k = 0; k < dist.size(); k++) {
        total += (std::popcount(local_label & k) & 1) ? -dist[k] : dist[k];
    }
    return total;
}

void SupportModel::add_channel(std::vector<size_t> support, std::vector<double> dist, bool require_distribution) {
    std::sort(support.begin(), support.end());
    if (std::adjacent_find(support.begin(), support.end()) != support.end()) {
        throw Error("channel support lists a coordinate twice");
    }
    if (support.size() > kMaxDenseBits) {
        throw CapExceededError("channel support too large for a dense outcome table");
    }
    if (dist.size() != (size_t{1} << support.size())) {
        throw DimensionError("channel on " + std::to_string(support.size()) + " coordinates needs " +
                             std::to_string(size_t{1} << support.size()) + " outcome probabilities, got " +
                             std::to_string(dist.size()));
    }
    if (require_distribution) {
        double total = 0.0;
        for (double p : dist) {
            if (p < 0.0 || !std::isfinite(p)) {
                throw Error("channel probabilities must be finite and non-negative");
            }
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw Error("channel probabilities sum to " + std::to_string(total) + ", not 1");
        }
    }
    Channel c;
    c.mask = BitVector::from_indices(layout_.size(), support);
    c.support = std::move(support);
    c.dist = std::move(dist);
    channels_.push_back(std::move(c));
}

void SupportModel::add_pauli_channel(size_t qubit, const PauliRates& rates, bool require_distribution) {
    if (qubit >= layout_.qubits) {
        throw DimensionError("qubit index out of range");
    }
    // Local outcome bits: bit 0 = x, bit 1 = z.
    add_channel({layout_.x_bit(qubit), layout_.z_bit(qubit)}, {rates.i, rates.x, rates.z, rates.y},
                require_distribution);
}

void SupportModel::add_flip_channel(size_t coordinate, double p) { add_channel({coordinate}, {1.0 - p, p}); }

std::vector<BitVector> SupportModel::supports() const {
    std::vector<BitVector> out;
    for (const auto& c : channels_) {
        out.push_back(c.mask);
    }
    return out;
}

bool SupportModel::positivity_holds() const {
    return std::all_of(channels_.begin(), channels_.end(), [](const Channel& c) { return c.dist[0] > 0.5; });
}

namespace {

void for_each_combination(size_t n, size_t k, const std::function<void(const std::vector<size_t>&)>& fn) {
    if (k > n) {
        return;
    }
    std::vector<size_t> idx(k);
    for (size_t i = 0; i < k; i++) {
        idx[i] = i;
    }
    while (true) {
        fn(idx);
        size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) {
            i--;
        }
        if (i == 0) {
            return;
        }
        idx[i - 1]++;
        for (size_t j = i; j < k; j++) {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

}  // namespace

std::vector<BitVector> make_weight_t_supports(const Layout& layout, size_t t, SupportMetric metric) {
    if (t < 1) {
        throw Error("support weight t must be at least 1");
    }
    std::vector<BitVector> out;
    if (metric == SupportMetric::hamming) {
        for_each_combination(layout.size(), t, [&](const std::vector<size_t>& c) {
            out.push_back(BitVector::from_indices(layout.size(), c));
        });
    } else {
        for_each_combination(layout.sites(), t, [&](const std::vector<size_t>& c) {
            BitVector s(layout.size());
            for (size_t site : c) {
                s |= layout.site_support(site);
            }
            out.push_back(std::move(s));
        });
    }
    return out;
}

std::vector<BitVector> gamma_hat(const Layout& layout, const std::vector<BitVector>& supports, bool barred) {
    std::set<BitVector, CanonicalLess> closure;
    for (const auto& g : supports) {
        BitVector base = barred ? layout.bar(g) : g;
        for (auto& a : nonempty_subsets_of(base)) {
            closure.insert(std::move(a));
        }
    }
    return {closure.begin(), closure.end()};
}

DenseFunction total_distribution(const SupportModel& model) {
    size_t bits = model.layout().size();
    if (bits > kMaxOracleBits) {
        throw CapExceededError("total distribution on " + std::to_string(bits) + " coordinates exceeds cap of " +
                               std::to_string(kMaxOracleBits));
    }
    DenseFunction p = DenseFunction::point_mass(bits);
    for (const auto& c : model.channels()) {
        DenseFunction next(bits);
        for (uint64_t k = 0; k < c.dist.size(); k++) {
            if (c.dist[k] == 0.0) {
                continue;
            }
            uint64_t shift = c.embed(k).to_mask();
            for (uint64_t e = 0; e < p.size(); e++) {
                next[e ^ shift] += p[e] * c.dist[k];
            }
        }
        p = std::move(next);
    }
    return p;
}

std::map<BitVector, double> exact_syndrome_statistics(const SupportModel& model, const Code& code) {
    if (model.layout() != code.layout()) {
        throw DimensionError("noise model and code have different layouts");
    }
    DenseFunction p = total_distribution(model);
    std::map<BitVector, double> stats;
    for (uint64_t e = 0; e < p.size(); e++) {
        if (p[e] == 0.0) {
            continue;
        }
        stats[code.syndrome(BitVector::from_mask(p.bits(), e))] += p[e];
    }
    return stats;
}

double exact_moment(const SupportModel& model, const BitVector& s, bool twist) {
    BitVector label = twist ? model.layout().bar(s) : s;
    double e = 1.0;
    for (const auto& c : model.channels()) {
        uint64_t local = c.restrict(label);
        if (local != 0) {
            e *= c.character(local);
        }
    }
    return e;
}

CounterRng::CounterRng(uint64_t seed, uint64_t stream) : key_(mix(seed) ^ stream) {}

uint64_t CounterRng::mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t CounterRng::next() {
    counter_++;
    return mix(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
}

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

SampleBatch::SampleBatch(size_t shots, uint64_t seed, size_t syndrome_bits)
    : shots_(shots), seed_(seed), syndrome_bits_(syndrome_bits), words_((syndrome_bits + 63) / 64) {
    if (words_ == 0) {
        words_ = 1;
    }
    data_.assign(shots_ * words_, 0);
}

BitVector SampleBatch::syndrome(size_t shot) const {
    BitVector s(syndrome_bits_);
    auto w = raw(shot);
    std::copy(w.begin(), w.begin() + s.words().size(), s.words().begin());
    return s;
}

std::map<BitVector, uint64_t> SampleBatch::histogram() const {
    std::map<BitVector, uint64_t> out;
    if (words_ == 1) {
        std::map<uint64_t, uint64_t> counts;
        for (size_t k = 0; k < shots_; k++) {
            counts[data_[k]]++;
        }
        for (auto [word, count] : counts) {
            out[BitVector::from_mask(syndrome_bits_, word)] = count;
        }
        return out;
    }
    for (size_t k = 0; k < shots_; k++) {
        out[syndrome(k)]++;
    }
    return out;
}

namespace {

struct PreparedChannel {
    std::vector<double> cdf;
    // Syndrome words of each local outcome, outcome-major.
    std::vector<uint64_t> syndromes;
};

}  // namespace

SampleBatch sample(const SupportModel& model, const Code& code, size_t shots, uint64_t seed, size_t threads) {
    if (model.layout() != code.layout()) {
        throw DimensionError("noise model and code have different layouts");
    }
    SampleBatch batch(shots, seed, code.check_rows());
    size_t words = batch.words_per_shot();

    std::vector<PreparedChannel> prepared;
    for (const auto& c : model.channels()) {
        PreparedChannel pc;
        double acc = 0.0;
        for (size_t k = 0; k < c.dist.size(); k++) {
            if (c.dist[k] < 0.0) {
                throw Error("cannot sample from a channel with negative probabilities");
            }
            acc += c.dist[k];
            pc.cdf.push_back(acc);
            BitVector s = code.syndrome(c.embed(k));
            for (size_t w = 0; w < words; w++) {
                pc.syndromes.push_back(w < s.words().size() ? s.words()[w] : 0);
            }
        }
        pc.cdf.back() = 1.0;
        prepared.push_back(std::move(pc));
    }

    size_t shards = (shots + kShotsPerShard - 1) / kShotsPerShard;
    auto run_shard = [&](size_t shard) {
        CounterRng rng(seed, shard);
        size_t begin = shard * kShotsPerShard;
        size_t end = std::min(shots, begin + kShotsPerShard);
        for (size_t k = begin; k < end; k++) {
            auto out = batch.raw(k);
            for (const auto& pc : prepared) {
                double u = rng.uniform();
                size_t outcome = std::upper_bound(pc.cdf.begin(), pc.cdf.end(), u) - pc.cdf.begin();
                outcome = std::min(outcome, pc.cdf.size() - 1);
                const uint64_t* syn = pc.syndromes.data() + outcome * words;
                for (size_t w = 0; w < words; w++) {
                    out[w] ^= syn[w];
                }
            }
        }
    };

    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, std::max<size_t>(shards, 1));
    if (threads <= 1) {
        for (size_t s = 0; s < shards; s++) {
            run_shard(s);
        }
        return batch;
    }
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; t++) {
        pool.emplace_back([&, t] {
            for (size_t s = t; s < shards; s += threads) {
                run_shard(s);
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    return batch;
}

}  // namespace synest
