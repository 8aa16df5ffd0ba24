#include "synest/identify.h"

#include <Eigen/Dense>
#include <algorithm>
#include <set>
#include <thread>

#include "synest/errors.h"
#include "synest/noise.h"

namespace synest {

namespace {

MomentSystem assemble(const Code& code, const std::vector<BitVector>& barred_closure,
                      std::vector<SpanElement> elements) {
    MomentSystem ms;
    ms.layout = code.layout();
    ms.group_size = uint64_t{1} << code.group_rank();
    for (const auto& c : barred_closure) {
        if (c.size() != ms.layout.size()) {
            throw DimensionError("closure label length does not match the code layout");
        }
    }
    ms.col_labels = barred_closure;
    std::vector<BitVector> rows;
    for (auto& el : elements) {
        ms.row_coeffs.push_back(std::move(el.coeffs));
        ms.row_labels.push_back(std::move(el.value));
    }
    ms.d = BitMatrix(ms.row_labels.size(), ms.col_labels.size());
    for (size_t r = 0; r < ms.row_labels.size(); r++) {
        for (size_t c = 0; c < ms.col_labels.size(); c++) {
            if (ms.col_labels[c].is_subset_of(ms.row_labels[r])) {
                ms.d.set(r, c);
            }
        }
    }
    return ms;
}

}  // namespace

MomentSystem build_coefficient_matrix(const Code& code, const std::vector<BitVector>& barred_closure, RowOrder order,
                                      size_t max_rank) {
    std::vector<SpanElement> span = enumerate_span(code.check(), max_rank);
    span.erase(span.begin());
    if (order == RowOrder::combination) {
        std::stable_sort(span.begin(), span.end(),
                         [](const SpanElement& a, const SpanElement& b) { return canonical_less(a.coeffs, b.coeffs); });
    }
    MomentSystem ms = assemble(code, barred_closure, std::move(span));
    ms.full_group = true;
    return ms;
}

MomentSystem build_coefficient_matrix_from_rows(const Code& code, const std::vector<BitVector>& barred_closure,
                                                const std::vector<BitVector>& row_coeffs) {
    std::vector<SpanElement> elements;
    std::set<BitVector> seen;
    for (const auto& z : row_coeffs) {
        if (z.size() != code.check_rows()) {
            throw DimensionError("row coefficient vector length does not match the number of check rows");
        }
        BitVector value = code.check().combine_rows(z);
        if (value.none() || !seen.insert(value).second) {
            continue;
        }
        elements.push_back({z, std::move(value)});
    }
    MomentSystem ms = assemble(code, barred_closure, std::move(elements));
    ms.full_group = ms.rows() + 1 == ms.group_size;
    return ms;
}

std::vector<int64_t> gram_counts(const MomentSystem& ms) {
    BitMatrix columns = ms.d.transposed();
    size_t c = ms.cols();
    std::vector<int64_t> g(c * c);
    for (size_t i = 0; i < c; i++) {
        for (size_t j = i; j < c; j++) {
            int64_t count = static_cast<int64_t>((columns.row(i) & columns.row(j)).weight());
            g[i * c + j] = count;
            g[j * c + i] = count;
        }
    }
    return g;
}

RescaledGram rescaled_gram(const MomentSystem& ms) {
    if (!ms.full_group) {
        throw Error("rescaled Gram matrix needs the full group as rows");
    }
    std::vector<int64_t> g = gram_counts(ms);
    size_t c = ms.cols();
    RescaledGram out;
    out.values = RationalMatrix(c, c);
    Integer size(std::to_string(ms.group_size));
    for (size_t i = 0; i < c; i++) {
        for (size_t j = 0; j < c; j++) {
            const BitVector& a = ms.col_labels[i];
            const BitVector& b = ms.col_labels[j];
            Integer scale;
            mpz_ui_pow_ui(scale.get_mpz_t(), 2, a.weight() + b.weight());
            Rational v(Integer(static_cast<long>(g[i * c + j])) * scale, size);
            v.canonicalize();
            bool integral = v.get_den() == 1;
            Integer expected;
            mpz_ui_pow_ui(expected.get_mpz_t(), 2, (a & b).weight());
            bool matches = integral && v.get_num() == expected;
            out.integral = out.integral && integral;
            if (!matches && !out.first_mismatch) {
                out.first_mismatch = std::make_pair(i, j);
            }
            out.matches_intersection = out.matches_intersection && matches;
            out.values.at(i, j) = std::move(v);
        }
    }
    return out;
}

IntersectionMatrix::IntersectionMatrix(size_t n, size_t t) : n_(n), t_(t) {
    if (n >= 64) {
        throw CapExceededError("intersection matrix ground set must have fewer than 64 elements");
    }
    t_ = std::min(t, n);
    Integer dim = lemma_alpha(n, t_) - 1;
    if (dim > static_cast<unsigned long>(kMaxDimension)) {
        throw CapExceededError("intersection matrix of dimension " + dim.get_str() + " exceeds cap of " +
                               std::to_string(kMaxDimension));
    }
    for (size_t k = 1; k <= t_; k++) {
        std::vector<size_t> idx(k);
        for (size_t i = 0; i < k; i++) {
            idx[i] = i;
        }
        while (true) {
            uint64_t mask = 0;
            for (size_t i : idx) {
                mask |= uint64_t{1} << i;
            }
            labels_.push_back(mask);
            size_t i = k;
            while (i > 0 && idx[i - 1] == n - k + i - 1) {
                i--;
            }
            if (i == 0) {
                break;
            }
            idx[i - 1]++;
            for (size_t j = i; j < k; j++) {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
}

size_t IntersectionMatrix::count_up_to(size_t k) const {
    return static_cast<size_t>(std::count_if(labels_.begin(), labels_.end(),
                                             [k](uint64_t l) { return static_cast<size_t>(std::popcount(l)) <= k; }));
}

int64_t IntersectionMatrix::entry(size_t i, size_t j) const {
    return int64_t{1} << std::popcount(labels_[i] & labels_[j]);
}

std::vector<int64_t> IntersectionMatrix::entries() const {
    size_t d = dimension();
    std::vector<int64_t> out(d * d);
    for (size_t i = 0; i < d; i++) {
        for (size_t j = 0; j < d; j++) {
            out[i * d + j] = entry(i, j);
        }
    }
    return out;
}

RationalMatrix IntersectionMatrix::matrix() const { return RationalMatrix::from_integers(dimension(), dimension(), entries()); }

Integer lemma_alpha(size_t n, size_t i) {
    Integer total = 0;
    for (size_t k = 0; k <= i; k++) {
        total += binomial(static_cast<int64_t>(n), static_cast<int64_t>(k));
    }
    return total;
}

Integer lemma_f(size_t i, size_t x) {
    Integer total = 0;
    for (size_t k = i; k <= x; k++) {
        total += binomial(static_cast<int64_t>(x), static_cast<int64_t>(k));
    }
    return total;
}

Rational lemma_u(size_t n, size_t i, size_t w, size_t w2) {
    Integer num = binomial(static_cast<int64_t>(w) - 1, static_cast<int64_t>(i)) *
                  binomial(static_cast<int64_t>(w2) - 1, static_cast<int64_t>(i));
    Rational u(num, lemma_alpha(n, i));
    u.canonicalize();
    return u;
}

Rational lemma7_entry(size_t n, size_t i, uint64_t a, uint64_t b) {
    Rational v = Rational(lemma_f(i + 1, std::popcount(a & b))) +
                 lemma_u(n, i, std::popcount(a), std::popcount(b));
    v.canonicalize();
    return v;
}

std::vector<RationalMatrix> schur_chain(const IntersectionMatrix& m) {
    std::vector<RationalMatrix> stages;
    if (m.t() == 0) {
        return stages;
    }
    stages.push_back(m.matrix());
    for (size_t i = 1; i < m.t(); i++) {
        size_t leading = binomial(static_cast<int64_t>(m.n()), static_cast<int64_t>(i)).get_ui();
        stages.push_back(schur_complement(stages.back(), leading));
    }
    return stages;
}

RankCertificate certify_full_rank(const MomentSystem& ms) {
    RankCertificate cert;
    cert.columns = ms.cols();
    cert.partial = !ms.full_group;
    cert.method = "exact";
    if (ms.cols() == 0) {
        cert.full_rank = true;
        cert.detail = "no columns";
        return cert;
    }
    std::vector<int64_t> g = gram_counts(ms);
    size_t c = ms.cols();

    Eigen::MatrixXd gf(c, c);
    for (size_t i = 0; i < c; i++) {
        for (size_t j = 0; j < c; j++) {
            gf(i, j) = static_cast<double>(g[i * c + j]);
        }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(gf);
    cert.float_rank = static_cast<size_t>(qr.rank());

    cert.rank = integer_rank(c, c, g);
    cert.full_rank = cert.rank == c;
    if (ms.full_group) {
        RescaledGram rg = rescaled_gram(ms);
        cert.intersection_certificate = rg.matches_intersection;
    }
    cert.detail = "rank(D^T D) = " + std::to_string(cert.rank) + " of " + std::to_string(c) + " over " +
                  std::to_string(ms.rows()) + (cert.partial ? " selected" : "") + " group elements";
    if (cert.intersection_certificate) {
        cert.detail += "; rescaled Gram equals 2^|a&b| (positive-definite intersection matrix)";
    }
    if (cert.float_rank != cert.rank) {
        cert.detail += "; floating-point pre-check disagreed (rank " + std::to_string(cert.float_rank) + ")";
    }
    return cert;
}

Verdict check_identifiability(const Code& code, const std::vector<BitVector>& supports, size_t threads) {
    for (const auto& s : supports) {
        if (s.size() != code.ambient_size()) {
            throw DimensionError("support length does not match the code layout");
        }
    }
    size_t k = supports.size();
    Verdict verdict;
    verdict.pairs_checked = k * (k + 1) / 2;
    if (k == 0) {
        return verdict;
    }

    // Pair (i, j) with i <= j; each worker takes every threads-th value of i.
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, k);
    std::vector<std::vector<std::pair<size_t, size_t>>> failing(threads);
    auto work = [&](size_t worker) {
        for (size_t i = worker; i < k; i += threads) {
            for (size_t j = i; j < k; j++) {
                if (!is_detectable_support(code, supports[i] | supports[j])) {
                    failing[worker].emplace_back(i, j);
                }
            }
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (size_t w = 0; w < threads; w++) {
            pool.emplace_back(work, w);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    std::vector<std::pair<size_t, size_t>> all;
    for (auto& f : failing) {
        all.insert(all.end(), f.begin(), f.end());
    }
    std::sort(all.begin(), all.end());
    verdict.failing_pairs = all.size();
    verdict.identifiable = all.empty();

    for (auto [i, j] : all) {
        auto error = undetectable_error_in(code, supports[i] | supports[j]);
        if (!error) {
            throw Error("internal: failing support pair has no undetectable error");
        }
        IdentifiabilityWitness w{supports[i], supports[j], *error, code.layout().pauli_weight(*error),
                                 code.is_stabilizer_element(*error)};
        if (!verdict.witness || (w.is_stabilizer && !verdict.witness->is_stabilizer)) {
            verdict.witness = std::move(w);
        }
        if (verdict.witness->is_stabilizer) {
            break;
        }
    }
    return verdict;
}

bool check_equivalent_condition(const Code& code, const std::vector<BitVector>& supports) {
    std::vector<BitVector> closure = gamma_hat(code.layout(), supports, false);
    std::vector<BitVector> syndromes;
    syndromes.reserve(closure.size());
    for (const auto& e : closure) {
        BitVector s = code.syndrome(e);
        if (s.none()) {
            return false;
        }
        syndromes.push_back(std::move(s));
    }
    for (size_t i = 0; i < syndromes.size(); i++) {
        for (size_t j = i + 1; j < syndromes.size(); j++) {
            if ((syndromes[i] ^ syndromes[j]).none()) {
                return false;
            }
        }
    }
    return true;
}

OrthogonalArrayChecker::OrthogonalArrayChecker(const Code& code, size_t max_rank) {
    std::vector<SpanElement> span = enumerate_span(code.check(), max_rank);
    rank_ = static_cast<size_t>(std::countr_zero(span.size()));
    words_ = (span.size() + 63) / 64;
    columns_.assign(code.ambient_size(), std::vector<uint64_t>(words_, 0));
    for (size_t r = 0; r < span.size(); r++) {
        for (size_t j : span[r].value.indices()) {
            columns_[j][r >> 6] |= uint64_t{1} << (r & 63);
        }
    }
}

std::vector<uint64_t> OrthogonalArrayChecker::pattern_counts(const std::vector<size_t>& gamma) const {
    if (gamma.size() > 20) {
        throw CapExceededError("pattern counts over more than 20 coordinates");
    }
    std::vector<uint64_t> all(words_, ~uint64_t{0});
    size_t elements = size_t{1} << rank_;
    if (elements % 64 != 0) {
        all.back() = (uint64_t{1} << (elements % 64)) - 1;
    }
    // Split the element set one coordinate at a time; pattern p keeps the
    // elements whose restriction agrees with the bits of p.
    std::vector<std::vector<uint64_t>> classes{std::move(all)};
    for (size_t j = 0; j < gamma.size(); j++) {
        if (gamma[j] >= columns_.size()) {
            throw DimensionError("pattern coordinate out of range");
        }
        const auto& col = columns_[gamma[j]];
        std::vector<std::vector<uint64_t>> next(classes.size() * 2, std::vector<uint64_t>(words_));
        for (size_t p = 0; p < classes.size(); p++) {
            for (size_t w = 0; w < words_; w++) {
                next[p][w] = classes[p][w] & ~col[w];
                next[p | (size_t{1} << j)][w] = classes[p][w] & col[w];
            }
        }
        classes = std::move(next);
    }
    std::vector<uint64_t> counts(classes.size());
    for (size_t p = 0; p < classes.size(); p++) {
        for (uint64_t w : classes[p]) {
            counts[p] += static_cast<uint64_t>(std::popcount(w));
        }
    }
    return counts;
}

bool OrthogonalArrayChecker::is_uniform(const std::vector<size_t>& gamma) const {
    if (gamma.size() > rank_) {
        return false;
    }
    uint64_t expected = uint64_t{1} << (rank_ - gamma.size());
    auto counts = pattern_counts(gamma);
    return std::all_of(counts.begin(), counts.end(), [&](uint64_t c) { return c == expected; });
}

bool orthogonal_array_check(const Code& code, const BitVector& gamma) {
    return OrthogonalArrayChecker(code).is_uniform(gamma.indices());
}

std::vector<BitVector> sign_symmetries(const MomentSystem& ms) { return nullspace(ms.d); }

}  // namespace synest
