#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "oracles.h"
#include "synest/errors.h"
#include "synest/noise.h"

using namespace synest;

namespace {

SupportModel five_qubit_model(const std::vector<PauliRates>& rates) {
    SupportModel model(Layout{5, 0});
    for (size_t q = 0; q < 5; q++) {
        model.add_pauli_channel(q, rates[q]);
    }
    return model;
}

SupportModel random_model(std::mt19937_64& rng, Layout layout, size_t channels, size_t max_support) {
    SupportModel model(layout);
    for (size_t c = 0; c < channels; c++) {
        size_t k = 1 + rng() % max_support;
        std::vector<size_t> idx(layout.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(std::min(k, layout.size()));
        model.add_channel(idx, oracle::random_peaked_distribution(rng, size_t{1} << idx.size(), 0.6));
    }
    return model;
}

}  // namespace

TEST(Supports, HammingAndPauliExamples) {
    auto h = make_weight_t_supports(Layout{0, 3}, 1, SupportMetric::hamming);
    ASSERT_EQ(h.size(), 3u);
    EXPECT_EQ(h[0].indices(), (std::vector<size_t>{0}));
    EXPECT_EQ(h[2].indices(), (std::vector<size_t>{2}));

    auto p = make_weight_t_supports(Layout{2, 0}, 1, SupportMetric::pauli);
    ASSERT_EQ(p.size(), 2u);
    EXPECT_EQ(p[0].indices(), (std::vector<size_t>{0, 2}));
    EXPECT_EQ(p[1].indices(), (std::vector<size_t>{1, 3}));

    for (size_t n = 1; n <= 8; n++) {
        for (size_t t = 1; t <= n; t++) {
            size_t binom = 1;
            for (size_t i = 0; i < t; i++) {
                binom = binom * (n - i) / (i + 1);
            }
            EXPECT_EQ(make_weight_t_supports(Layout{0, n}, t, SupportMetric::hamming).size(), binom);
        }
    }
    // Data-syndrome layout: qubit sites carry two coordinates, measurement
    // sites one.
    auto ds = make_weight_t_supports(Layout{1, 1}, 1, SupportMetric::pauli);
    ASSERT_EQ(ds.size(), 2u);
    EXPECT_EQ(ds[1].indices(), (std::vector<size_t>{2}));
    EXPECT_THROW(make_weight_t_supports(Layout{0, 3}, 0, SupportMetric::hamming), Error);
}

TEST(GammaHat, Examples) {
    Layout l{0, 3};
    auto closure = gamma_hat(l, {BitVector::from_indices(3, {0, 1})}, false);
    ASSERT_EQ(closure.size(), 3u);
    EXPECT_EQ(closure[0].indices(), (std::vector<size_t>{0}));
    EXPECT_EQ(closure[1].indices(), (std::vector<size_t>{1}));
    EXPECT_EQ(closure[2].indices(), (std::vector<size_t>{0, 1}));

    // Gamma_t closes to all nonempty subsets of size <= t.
    Layout six{0, 6};
    auto g2 = gamma_hat(six, make_weight_t_supports(six, 2, SupportMetric::hamming), false);
    EXPECT_EQ(g2.size(), 6u + 15u);
    for (const auto& a : g2) {
        EXPECT_LE(a.weight(), 2u);
    }

    Layout five{5, 0};
    auto q = gamma_hat(five, make_weight_t_supports(five, 1, SupportMetric::pauli), true);
    ASSERT_EQ(q.size(), 15u);
    for (size_t i = 0; i < 5; i++) {
        EXPECT_EQ(q[i].indices(), (std::vector<size_t>{i}));
        EXPECT_EQ(q[5 + i].indices(), (std::vector<size_t>{5 + i}));
        EXPECT_EQ(q[10 + i].indices(), (std::vector<size_t>{i, 5 + i}));
    }
}

TEST(GammaHat, BarredClosureAppliesBarFirst) {
    Layout l{2, 1};
    // Support {x_1, m_1}; its bar is {z_1, m_1}.
    auto closure = gamma_hat(l, {BitVector::from_indices(5, {0, 4})}, true);
    ASSERT_EQ(closure.size(), 3u);
    EXPECT_EQ(closure[2].indices(), (std::vector<size_t>{2, 4}));
}

TEST(GammaHat, DownwardClosed) {
    std::mt19937_64 rng(1);
    Layout l{3, 2};
    for (int trial = 0; trial < 20; trial++) {
        std::vector<BitVector> supports;
        for (int k = 0; k < 3; k++) {
            supports.push_back(BitVector::from_mask(l.size(), rng() & rng()));
        }
        auto closure = gamma_hat(l, supports, trial % 2 == 0);
        std::set<BitVector> members(closure.begin(), closure.end());
        for (const auto& b : closure) {
            for (const auto& c : nonempty_subsets_of(b)) {
                EXPECT_TRUE(members.count(c));
            }
        }
    }
}

TEST(TotalDistribution, Examples) {
    Layout l{0, 3};
    SupportModel single(l);
    single.add_channel({1, 2}, {0.4, 0.3, 0.2, 0.1});
    DenseFunction p = total_distribution(single);
    EXPECT_DOUBLE_EQ(p[0b000], 0.4);
    EXPECT_DOUBLE_EQ(p[0b010], 0.3);
    EXPECT_DOUBLE_EQ(p[0b100], 0.2);
    EXPECT_DOUBLE_EQ(p[0b110], 0.1);

    SupportModel quiet(l);
    quiet.add_channel({0}, {1.0, 0.0});
    quiet.add_channel({1, 2}, {1.0, 0.0, 0.0, 0.0});
    DenseFunction q = total_distribution(quiet);
    EXPECT_DOUBLE_EQ(q[0], 1.0);
    EXPECT_DOUBLE_EQ(q.sum(), 1.0);
}

TEST(TotalDistribution, OverlappingChannelsMatchPairEnumeration) {
    Layout l{0, 3};
    std::vector<double> a = {0.5, 0.2, 0.2, 0.1};
    std::vector<double> b = {0.6, 0.25, 0.1, 0.05};
    SupportModel model(l);
    model.add_channel({0, 1}, a);
    model.add_channel({1, 2}, b);
    std::vector<double> want(8, 0.0);
    for (uint64_t e1 = 0; e1 < 4; e1++) {
        for (uint64_t e2 = 0; e2 < 4; e2++) {
            want[e1 ^ (e2 << 1)] += a[e1] * b[e2];
        }
    }
    DenseFunction p = total_distribution(model);
    for (uint64_t e = 0; e < 8; e++) {
        EXPECT_NEAR(p[e], want[e], 1e-15);
    }
}

TEST(SupportModel, ValidatesChannels) {
    SupportModel model(Layout{1, 1});
    EXPECT_THROW(model.add_channel({0}, {0.5, 0.6}), Error);
    EXPECT_THROW(model.add_channel({0}, {0.5, 0.25, 0.25}), DimensionError);
    EXPECT_THROW(model.add_channel({0, 0}, {1, 0, 0, 0}), Error);
    EXPECT_THROW(model.add_pauli_channel(1, {}), DimensionError);
    EXPECT_NO_THROW(model.add_channel({0}, {1.5, -0.5}, false));
    EXPECT_FALSE(SupportModel(Layout{1, 0}).channels().size());
    SupportModel good(Layout{1, 0});
    good.add_pauli_channel(0, {0.9, 0.05, 0.03, 0.02});
    EXPECT_TRUE(good.positivity_holds());
    good.add_pauli_channel(0, {0.4, 0.2, 0.2, 0.2});
    EXPECT_FALSE(good.positivity_holds());
}

TEST(ExactSyndromeStatistics, Examples) {
    Code rep = repetition_code(3);
    SupportModel noiseless(rep.layout());
    noiseless.add_flip_channel(0, 0.0);
    auto stats = exact_syndrome_statistics(noiseless, rep);
    ASSERT_EQ(stats.size(), 1u);
    EXPECT_TRUE(stats.begin()->first.none());

    double p = 0.07;
    SupportModel middle(rep.layout());
    middle.add_flip_channel(1, p);
    auto s = exact_syndrome_statistics(middle, rep);
    EXPECT_NEAR(s[BitVector::from_string("11")], p, 1e-15);
    EXPECT_NEAR(s[BitVector::from_string("00")], 1 - p, 1e-15);
}

TEST(ExactMoment, Examples) {
    SupportModel model = five_qubit_model({{0.9, 0.05, 0.03, 0.02},
                                           {0.85, 0.05, 0.05, 0.05},
                                           {0.8, 0.1, 0.05, 0.05},
                                           {0.95, 0.02, 0.02, 0.01},
                                           {0.7, 0.1, 0.1, 0.1}});
    EXPECT_DOUBLE_EQ(exact_moment(model, BitVector(10), true), 1.0);
    // Single channel moment: label inside one support.
    BitVector x1 = BitVector::from_indices(10, {0});
    EXPECT_NEAR(exact_moment(model, x1, true), 0.9 + 0.05 - 0.03 - 0.02, 1e-15);

    // s = Y Z I Z Y factors into per-qubit moments.
    BitVector s = encode_pauli("YZIZY").bits();
    auto single = [&](const std::string& letters) { return exact_moment(model, encode_pauli(letters).bits(), true); };
    double want = single("YIIII") * single("IZIII") * single("IIIZI") * single("IIIIY");
    EXPECT_NEAR(exact_moment(model, s, true), want, 1e-15);
}

TEST(ExactMoment, AgreesWithTotalDistribution) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 10; trial++) {
        Layout l{static_cast<size_t>(1 + trial % 4), static_cast<size_t>(trial % 3)};
        SupportModel model = random_model(rng, l, 3, 3);
        DenseFunction p = total_distribution(model);
        auto closure = gamma_hat(l, model.supports(), true);
        for (const auto& s : closure) {
            EXPECT_NEAR(exact_moment(model, s, true), moment(p, l, s, true), 1e-12);
        }
        for (uint64_t s = 0; s < p.size(); s++) {
            BitVector label = BitVector::from_mask(l.size(), s);
            EXPECT_NEAR(exact_moment(model, label, false), moment(p, l, label, false), 1e-12);
        }
    }
}

TEST(LemmaTwo, TransformedMomentIsAProductOverContainingChannels) {
    // F(a) of the total distribution equals the product over channels gamma
    // containing a of prod_{b subset a} E_gamma(b)^mu(a, b).
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 12; trial++) {
        size_t n = 3 + trial % 8;
        Layout l{0, n};
        SupportModel model = random_model(rng, l, 2 + trial % 3, 4);
        DenseFunction p = total_distribution(model);
        auto closure = gamma_hat(l, model.supports(), false);
        MomentTable e(n);
        for (const auto& a : closure) {
            e.set(a, moment(p, l, a, false));
        }
        for (const auto& a : closure) {
            double f = inclusion_exclusion_transform(e, a);
            double want = 1.0;
            for (const auto& c : model.channels()) {
                if (!a.is_subset_of(c.mask)) {
                    continue;
                }
                for (const auto& b : subsets_of(a)) {
                    double eb = c.character(c.restrict(b));
                    want *= ((a.weight() + b.weight()) % 2 == 0) ? eb : 1.0 / eb;
                }
            }
            EXPECT_NEAR(f, want, 1e-10 * std::abs(want));
        }
    }
}

TEST(Sample, NoiselessAndDeterministic) {
    Code code = five_qubit_code();
    SupportModel quiet = five_qubit_model(std::vector<PauliRates>(5));
    SampleBatch b = sample(quiet, code, 1000, 1);
    for (size_t k = 0; k < b.shots(); k++) {
        EXPECT_TRUE(b.syndrome(k).none());
    }
    SupportModel noisy = five_qubit_model(std::vector<PauliRates>(5, {0.9, 0.05, 0.03, 0.02}));
    EXPECT_EQ(sample(noisy, code, 5000, 42), sample(noisy, code, 5000, 42));
    EXPECT_FALSE(sample(noisy, code, 5000, 42) == sample(noisy, code, 5000, 43));
}

TEST(Sample, IndependentOfThreadCount) {
    Code code = five_qubit_code();
    SupportModel noisy = five_qubit_model(std::vector<PauliRates>(5, {0.9, 0.05, 0.03, 0.02}));
    size_t shots = 3 * kShotsPerShard + 17;
    SampleBatch one = sample(noisy, code, shots, 9, 1);
    SampleBatch four = sample(noisy, code, shots, 9, 4);
    EXPECT_EQ(one, four);
}

TEST(Sample, FrequenciesMatchExactStatisticsWithinFourSigma) {
    Code code = five_qubit_code();
    SupportModel model = five_qubit_model(std::vector<PauliRates>(5, {0.88, 0.05, 0.04, 0.03}));
    auto exact = exact_syndrome_statistics(model, code);
    double total = 0.0;
    for (const auto& [s, p] : exact) {
        total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);

    const size_t shots = 1'000'000;
    SampleBatch batch = sample(model, code, shots, 2024);
    auto hist = batch.histogram();
    for (const auto& [s, p] : exact) {
        double freq = hist.count(s) ? static_cast<double>(hist.at(s)) / shots : 0.0;
        double sigma = std::sqrt(p * (1 - p) / shots);
        EXPECT_LE(std::abs(freq - p), 4 * sigma + 1e-12) << s.to_string();
    }
}

TEST(Sample, EmpiricalMomentsConvergeToExactMoments) {
    Code code = five_qubit_code();
    SupportModel model = five_qubit_model(std::vector<PauliRates>(5, {0.9, 0.04, 0.04, 0.02}));
    const size_t shots = 100'000;
    SampleBatch batch = sample(model, code, shots, 77);
    auto hist = batch.histogram();
    for (const auto& el : enumerate_span(code.check())) {
        double total = 0.0;
        for (const auto& [s, count] : hist) {
            total += el.coeffs.dot(s) ? -static_cast<double>(count) : static_cast<double>(count);
        }
        double empirical = total / shots;
        double exact = exact_moment(model, el.value, true);
        EXPECT_LE(std::abs(empirical - exact), 4.0 / std::sqrt(static_cast<double>(shots)));
    }
}

TEST(CounterRng, StreamsDifferAndUniformIsInRange) {
    CounterRng a(1, 0);
    CounterRng b(1, 1);
    CounterRng c(1, 0);
    EXPECT_NE(a.next(), b.next());
    CounterRng d(1, 0);
    EXPECT_EQ(c.next(), d.next());
    for (int i = 0; i < 1000; i++) {
        double u = a.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}
