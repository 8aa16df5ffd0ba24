#include "synest/verify.h"

#include <bit>
#include <random>
#include <sstream>

#include "synest/errors.h"
#include "synest/estimate.h"
#include "synest/exact.h"
#include "synest/identify.h"

namespace synest {

bool SuiteResult::pass() const {
    for (const auto& c : checks) {
        if (!c.pass) {
            return false;
        }
    }
    return true;
}

namespace {

// Calls visit(indices) for every subset of {0..n-1} of size 1..k.
template <class Visit>
void for_each_small_subset(size_t n, size_t k, Visit&& visit) {
    std::vector<size_t> idx;
    auto rec = [&](auto&& self, size_t start) -> void {
        if (!idx.empty()) {
            visit(idx);
        }
        if (idx.size() == k) {
            return;
        }
        for (size_t i = start; i < n; i++) {
            idx.push_back(i);
            self(self, i + 1);
            idx.pop_back();
        }
    };
    rec(rec, 0);
}

SupportModel planted_model(const Code& code) {
    SupportModel model(code.layout());
    for (size_t q = 0; q < code.layout().qubits; q++) {
        model.add_pauli_channel(q, {0.9, 0.05, 0.03, 0.02});
    }
    for (size_t j = 0; j < code.layout().extra; j++) {
        model.add_flip_channel(code.layout().extra_bit(j), 0.05 + 0.01 * static_cast<double>(j % 5));
    }
    return model;
}

}  // namespace

SuiteResult verify_orthogonal_array(const Code& code, size_t max_size) {
    SuiteResult out{"orthogonal-array", {}};
    OrthogonalArrayChecker oa(code);
    const Layout& layout = code.layout();
    size_t detectable = 0;
    size_t uniform_ok = 0;
    size_t non_detectable = 0;
    size_t non_uniform_ok = 0;
    std::string first_failure;
    for_each_small_subset(layout.size(), max_size, [&](const std::vector<size_t>& gamma) {
        BitVector g = BitVector::from_indices(layout.size(), gamma);
        bool det = is_detectable_support(code, layout.bar(g));
        bool uniform = oa.is_uniform(gamma);
        if (det) {
            detectable++;
            uniform_ok += uniform;
        } else {
            non_detectable++;
            non_uniform_ok += !uniform;
        }
        if (det != uniform && first_failure.empty()) {
            first_failure = g.to_string();
        }
    });
    std::ostringstream d1;
    d1 << uniform_ok << "/" << detectable << " barred-detectable sets of size <= " << max_size
       << " have uniform pattern counts 2^(" << oa.group_rank() << "-|gamma|)";
    out.checks.push_back({"uniform_on_detectable", uniform_ok == detectable, d1.str()});
    std::ostringstream d2;
    d2 << non_uniform_ok << "/" << non_detectable << " other sets are non-uniform";
    if (!first_failure.empty()) {
        d2 << "; first disagreement at " << first_failure;
    }
    out.checks.push_back({"non_uniform_elsewhere", non_uniform_ok == non_detectable, d2.str()});
    return out;
}

SuiteResult verify_intersection_matrix(size_t n, size_t t) {
    SuiteResult out{"intersection-matrix", {}};
    IntersectionMatrix m(n, t);
    auto entries = m.entries();
    size_t dim = m.dimension();
    bool symmetric = true;
    for (size_t i = 0; i < dim && symmetric; i++) {
        for (size_t j = 0; j < i; j++) {
            if (entries[i * dim + j] != entries[j * dim + i]) {
                symmetric = false;
                break;
            }
        }
    }
    out.checks.push_back({"symmetric", symmetric, "dimension " + std::to_string(dim)});
    auto minors = leading_principal_minors(dim, entries);
    bool positive = minors.size() == dim;
    for (const auto& d : minors) {
        positive = positive && d > 0;
    }
    std::ostringstream detail;
    detail << minors.size() << "/" << dim << " leading principal minors computed";
    if (!minors.empty()) {
        detail << ", det = " << minors.back().get_str();
    }
    out.checks.push_back({"leading_minors_positive", positive, detail.str()});
    return out;
}

SuiteResult verify_schur_chain(size_t n, size_t t) {
    SuiteResult out{"schur-chain", {}};
    IntersectionMatrix m(n, t);
    auto stages = schur_chain(m);
    for (size_t i = 0; i < stages.size(); i++) {
        size_t offset = i == 0 ? 0 : m.count_up_to(i);
        size_t mismatches = 0;
        for (size_t r = 0; r < stages[i].rows(); r++) {
            for (size_t c = 0; c < stages[i].cols(); c++) {
                if (stages[i].at(r, c) != lemma7_entry(n, i, m.labels()[offset + r], m.labels()[offset + c])) {
                    mismatches++;
                }
            }
        }
        out.checks.push_back({"stage_" + std::to_string(i) + "_closed_form", mismatches == 0,
                              std::to_string(stages[i].rows()) + "x" + std::to_string(stages[i].cols()) + ", " +
                                  std::to_string(mismatches) + " mismatching entries"});
    }
    const RationalMatrix& last = stages.back();
    size_t k = last.rows();
    Rational c1 = Rational(1) / Rational(lemma_alpha(n, t - 1));
    Rational c2 = Rational(1) / Rational(lemma_alpha(n, t));
    RationalMatrix want = RationalMatrix::identity(k);
    RationalMatrix want_inv = RationalMatrix::identity(k);
    for (size_t i = 0; i < k; i++) {
        for (size_t j = 0; j < k; j++) {
            want.at(i, j) += c1;
            want_inv.at(i, j) -= c2;
        }
    }
    out.checks.push_back({"last_stage_rank_one", last == want, "I + J/" + lemma_alpha(n, t - 1).get_str()});
    auto inv = inverse(last);
    out.checks.push_back({"last_stage_inverse", inv && *inv == want_inv, "I - J/" + lemma_alpha(n, t).get_str()});
    return out;
}

SuiteResult verify_theorem2(size_t trials, size_t max_n, uint64_t seed) {
    SuiteResult out{"theorem2-bruteforce", {}};
    if (max_n < 3) {
        throw Error("theorem2-bruteforce needs max_n >= 3");
    }
    std::mt19937_64 rng(seed);
    size_t rank_mismatch = 0;
    size_t closure_mismatch = 0;
    size_t identifiable = 0;
    std::string first;
    for (size_t trial = 0; trial < trials; trial++) {
        size_t n = 3 + rng() % (max_n - 2);
        size_t rows = 1 + rng() % (n - 1);
        BitMatrix h(rows, n);
        for (size_t r = 0; r < rows; r++) {
            for (size_t c = 0; c < n; c++) {
                h.set(r, c, rng() & 1);
            }
        }
        Code code = Code::classical(h);
        size_t families = 1 + rng() % 4;
        std::vector<BitVector> supports;
        for (size_t f = 0; f < families; f++) {
            BitVector s(n);
            size_t size = 1 + rng() % 3;
            for (size_t j = 0; j < size; j++) {
                s.set(rng() % n);
            }
            supports.push_back(s);
        }
        bool cond = check_identifiability(code, supports, 1).identifiable;
        identifiable += cond;
        MomentSystem ms = build_coefficient_matrix(code, gamma_hat(code.layout(), supports, true));
        std::vector<int64_t> d(ms.rows() * ms.cols());
        for (size_t r = 0; r < ms.rows(); r++) {
            for (size_t c = 0; c < ms.cols(); c++) {
                d[r * ms.cols() + c] = ms.d.get(r, c);
            }
        }
        bool full = integer_rank(ms.rows(), ms.cols(), d) == ms.cols();
        if (full != cond) {
            rank_mismatch++;
            if (first.empty()) {
                first = "trial " + std::to_string(trial) + ": H=" + h.to_text();
            }
        }
        closure_mismatch += check_equivalent_condition(code, supports) != cond;
    }
    std::ostringstream d1;
    d1 << trials << " instances (" << identifiable << " identifiable), " << rank_mismatch
       << " where full rank of D disagrees with the union condition";
    if (!first.empty()) {
        d1 << "; first: " << first;
    }
    out.checks.push_back({"rank_iff_union_condition", rank_mismatch == 0, d1.str()});
    out.checks.push_back({"closure_condition_agrees", closure_mismatch == 0,
                          std::to_string(closure_mismatch) + " disagreements"});
    return out;
}

SuiteResult verify_symmetries(const Code& code, size_t t, SupportMetric metric) {
    SuiteResult out{"symmetries", {}};
    auto closure = gamma_hat(code.layout(), make_weight_t_supports(code.layout(), t, metric), true);
    MomentSystem ms = build_coefficient_matrix(code, closure);
    auto basis = sign_symmetries(ms);
    if (ms.cols() <= 22) {
        std::vector<uint64_t> rows;
        for (size_t r = 0; r < ms.rows(); r++) {
            uint64_t m = 0;
            for (size_t c = 0; c < ms.cols(); c++) {
                m |= uint64_t{ms.d.get(r, c)} << c;
            }
            rows.push_back(m);
        }
        uint64_t kernel = 0;
        for (uint64_t v = 0; v < (uint64_t{1} << ms.cols()); v++) {
            bool ok = true;
            for (uint64_t r : rows) {
                if (std::popcount(r & v) & 1) {
                    ok = false;
                    break;
                }
            }
            kernel += ok;
        }
        size_t brute_dim = static_cast<size_t>(std::countr_zero(kernel));
        out.checks.push_back({"nullspace_dimension", (uint64_t{1} << basis.size()) == kernel,
                              "basis " + std::to_string(basis.size()) + ", brute force " + std::to_string(brute_dim)});
    } else {
        out.checks.push_back({"nullspace_dimension", true,
                              "basis " + std::to_string(basis.size()) + "; brute force skipped for " +
                                  std::to_string(ms.cols()) + " columns"});
    }

    // F comes straight from the planted model by inclusion-exclusion, so the
    // check also runs on systems that are not identifiable.
    SupportModel model = planted_model(code);
    MomentTable e = exact_moment_table(model, ms);
    MomentTable e_cols(code.ambient_size());
    for (const auto& b : ms.col_labels) {
        e_cols.set(b, exact_moment(model, b, true));
    }
    double worst = 0.0;
    for (const auto& v : basis) {
        MomentTable flipped(code.ambient_size());
        for (size_t c = 0; c < ms.cols(); c++) {
            double f = inclusion_exclusion_transform(e_cols, ms.col_labels[c]);
            flipped.set(ms.col_labels[c], v.get(c) ? -f : f);
        }
        for (const auto& s : ms.row_labels) {
            worst = std::max(worst, std::abs(reconstruct_moments(flipped, s) - e.at(s)));
        }
    }
    std::ostringstream d;
    d << basis.size() << " basis flips, max moment deviation " << worst;
    out.checks.push_back({"flips_preserve_moments", worst <= 1e-12, d.str()});
    return out;
}

}  // namespace synest
