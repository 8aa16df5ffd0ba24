#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "synest/bits.h"
#include "synest/code.h"
#include "synest/fourier.h"
#include "synest/pauli.h"

namespace synest {

/// Single-qubit Pauli error rates.
struct PauliRates {
    double i = 1.0;
    double x = 0.0;
    double z = 0.0;
    double y = 0.0;

    double sum() const { return i + x + z + y; }
};

/// An error channel acting on a subset of phase-space coordinates. Local
/// outcome k assigns bit j of k to coordinate support[j] (support sorted
/// ascending).
struct Channel {
    std::vector<size_t> support;
    BitVector mask;
    std::vector<double> dist;

    /// Embeds a local outcome as an error on the full layout.
    BitVector embed(uint64_t local) const;
    /// Restricts a full-length label to the support, as a local bit mask.
    uint64_t restrict(const BitVector& label) const;
    /// sum_k (-1)^(popcount(local_label & k)) dist[k].
    double character(uint64_t local_label) const;
};

/// A family of independent channels; the total error is the sum of one draw
/// from each.
class SupportModel {
   public:
    explicit SupportModel(Layout layout) : layout_(layout) {}

    /// dist has 2^|support| entries. With require_distribution the entries
    /// must be non-negative and sum to one within 1e-12; signed tables are
    /// accepted otherwise (used to realise sign-flipped moment tables).
    void add_channel(std::vector<size_t> support, std::vector<double> dist, bool require_distribution = true);
    /// Channel on the (x, z) bits of a qubit.
    void add_pauli_channel(size_t qubit, const PauliRates& rates, bool require_distribution = true);
    /// Bit-flip channel on one coordinate.
    void add_flip_channel(size_t coordinate, double p);

    const Layout& layout() const { return layout_; }
    const std::vector<Channel>& channels() const { return channels_; }
    std::vector<BitVector> supports() const;
    /// P_gamma(0) > 1/2 for every channel.
    bool positivity_holds() const;

   private:
    Layout layout_;
    std::vector<Channel> channels_;
};

enum class SupportMetric { hamming, pauli };

/// hamming: all t-subsets of coordinates. pauli: for every set of t sites
/// (qubits and classical bits), the union of their coordinates.
std::vector<BitVector> make_weight_t_supports(const Layout& layout, size_t t, SupportMetric metric);

/// All nonempty subsets of members of supports (after applying bar when
/// barred is set), deduplicated, in canonical order.
std::vector<BitVector> gamma_hat(const Layout& layout, const std::vector<BitVector>& supports, bool barred);

/// Largest layout for which dense oracles are built.
inline constexpr size_t kMaxOracleBits = 20;

/// Boolean convolution of all channels.
DenseFunction total_distribution(const SupportModel& model);

/// Pushforward of the total distribution through the code's syndrome map.
std::map<BitVector, double> exact_syndrome_statistics(const SupportModel& model, const Code& code);

/// prod over channels of E_gamma(s restricted to gamma); with twist the
/// label is barred first. Cost scales with the number of channels.
double exact_moment(const SupportModel& model, const BitVector& s, bool twist);

/// Counter-based generator: SplitMix64 run in counter mode. Stream keys are
/// mix(seed) xor stream, so shard k of a batch always draws the same values
/// regardless of how shards are scheduled.
class CounterRng {
   public:
    CounterRng(uint64_t seed, uint64_t stream);
    uint64_t next();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();

    static uint64_t mix(uint64_t z);

   private:
    uint64_t key_;
    uint64_t counter_ = 0;
};

/// Syndromes of K independent error draws, packed words_per_shot words each.
class SampleBatch {
   public:
    SampleBatch(size_t shots, uint64_t seed, size_t syndrome_bits);

    size_t shots() const { return shots_; }
    uint64_t seed() const { return seed_; }
    size_t syndrome_bits() const { return syndrome_bits_; }
    size_t words_per_shot() const { return words_; }
    BitVector syndrome(size_t shot) const;
    std::span<const uint64_t> raw(size_t shot) const { return {data_.data() + shot * words_, words_}; }
    std::span<uint64_t> raw(size_t shot) { return {data_.data() + shot * words_, words_}; }
    /// Distinct syndromes with their counts.
    std::map<BitVector, uint64_t> histogram() const;

    friend bool operator==(const SampleBatch&, const SampleBatch&) = default;

   private:
    size_t shots_;
    uint64_t seed_;
    size_t syndrome_bits_;
    size_t words_;
    std::vector<uint64_t> data_;
};

/// Shots per deterministic RNG stream.
inline constexpr size_t kShotsPerShard = 1 << 16;

/// threads == 0 uses std::thread::hardware_concurrency(). Output does not
/// depend on the thread count.
SampleBatch sample(const SupportModel& model, const Code& code, size_t shots, uint64_t seed, size_t threads = 0);

}  // namespace synest
