#include "synest/estimate.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "synest/errors.h"

namespace synest {

std::vector<double> empirical_moments(const SampleBatch& batch, const std::vector<BitVector>& row_coeffs) {
    if (batch.shots() == 0) {
        throw Error("empirical moments of an empty batch");
    }
    for (const auto& z : row_coeffs) {
        if (z.size() != batch.syndrome_bits()) {
            throw DimensionError("row coefficient length does not match syndrome length");
        }
    }
    auto hist = batch.histogram();
    double k = static_cast<double>(batch.shots());
    std::vector<double> out(row_coeffs.size());
    if (batch.syndrome_bits() <= kMaxDenseBits) {
        DenseFunction freq(batch.syndrome_bits());
        for (const auto& [syn, count] : hist) {
            freq[syn.to_mask()] = static_cast<double>(count);
        }
        DenseFunction chi = fourier_transform(freq);
        for (size_t r = 0; r < row_coeffs.size(); r++) {
            out[r] = chi[row_coeffs[r].to_mask()] / k;
        }
        return out;
    }
    for (size_t r = 0; r < row_coeffs.size(); r++) {
        int64_t total = 0;
        for (const auto& [syn, count] : hist) {
            total += row_coeffs[r].dot(syn) ? -static_cast<int64_t>(count) : static_cast<int64_t>(count);
        }
        out[r] = static_cast<double>(total) / k;
    }
    return out;
}

MomentTable empirical_moment_table(const SampleBatch& batch, const MomentSystem& ms) {
    std::vector<double> values = empirical_moments(batch, ms.row_coeffs);
    MomentTable table(ms.layout.size());
    for (size_t r = 0; r < ms.rows(); r++) {
        table.set(ms.row_labels[r], values[r]);
    }
    return table;
}

MomentTable exact_moment_table(const SupportModel& model, const MomentSystem& ms) {
    if (model.layout() != ms.layout) {
        throw DimensionError("noise model and moment system have different layouts");
    }
    MomentTable table(ms.layout.size());
    for (const auto& s : ms.row_labels) {
        table.set(s, exact_moment(model, s, true));
    }
    return table;
}

SolveResult solve_binomial_system(const MomentSystem& ms, const MomentTable& moments, const SolveOptions& options) {
    SolveResult result;
    result.f = MomentTable(ms.layout.size());
    size_t rows = ms.rows();
    size_t cols = ms.cols();
    if (cols == 0) {
        return result;
    }

    Eigen::VectorXd y(rows);
    Eigen::VectorXd w = Eigen::VectorXd::Ones(rows);
    std::vector<size_t> bad;
    for (size_t r = 0; r < rows; r++) {
        double e = moments.at(ms.row_labels[r]);
        if (!(e > 0.0)) {
            bad.push_back(r);
            if (options.non_positive == NonPositivePolicy::clamp) {
                double k = options.shots > 0 ? static_cast<double>(options.shots) : 1e6;
                e = std::min(1.0, 10.0 / k);
            }
        }
        y(r) = std::log(e);
        if (options.weighting == Weighting::variance) {
            double k = options.shots > 0 ? static_cast<double>(options.shots) : 1.0;
            // Delta method: Var(log E_hat) ~ (1 - E^2) / (K E^2).
            double var = std::max(1.0 - e * e, 1.0 / k) / (e * e);
            w(r) = k / var;
        }
    }
    if (!bad.empty()) {
        std::ostringstream msg;
        msg << bad.size() << " non-positive empirical moment(s) at row(s)";
        for (size_t i = 0; i < std::min<size_t>(bad.size(), 8); i++) {
            msg << ' ' << bad[i] << " (s=" << ms.row_labels[bad[i]].to_string()
                << ", E=" << moments.at(ms.row_labels[bad[i]]) << ')';
        }
        if (bad.size() > 8) {
            msg << " ...";
        }
        if (options.non_positive == NonPositivePolicy::error) {
            throw NonPositiveMomentError(msg.str() +
                                         "; too few shots or the positivity assumption P_gamma(0) > 1/2 fails");
        }
        result.warnings.push_back("CLAMPED " + msg.str() + " to 10/K before taking logarithms");
    }

    std::vector<int64_t> counts = gram_counts(ms);
    if (integer_rank(cols, cols, counts) != cols) {
        throw IdentifiabilityError("coefficient matrix D is rank deficient; F is not identifiable from these rows");
    }

    Eigen::MatrixXd d(rows, cols);
    for (size_t r = 0; r < rows; r++) {
        for (size_t c = 0; c < cols; c++) {
            d(r, c) = ms.d.get(r, c) ? 1.0 : 0.0;
        }
    }
    Eigen::MatrixXd gram;
    Eigen::VectorXd rhs;
    if (options.weighting == Weighting::unweighted) {
        // The unweighted Gram has exact integer entries.
        gram.resize(cols, cols);
        for (size_t i = 0; i < cols; i++) {
            for (size_t j = 0; j < cols; j++) {
                gram(i, j) = static_cast<double>(counts[i * cols + j]);
            }
        }
        rhs = d.transpose() * y;
    } else {
        gram = d.transpose() * w.asDiagonal() * d;
        rhs = d.transpose() * w.asDiagonal() * y;
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    Eigen::VectorXd x = ldlt.solve(rhs);
    // One step of iterative refinement keeps exact inputs at round-off level.
    x += ldlt.solve(rhs - gram * x);

    result.residual_norm = (d * x - y).norm();
    for (size_t c = 0; c < cols; c++) {
        result.f.set(ms.col_labels[c], std::exp(x(c)));
    }
    return result;
}

double reconstruct_moments(const MomentTable& f, const BitVector& a) {
    if (a.size() != f.ambient()) {
        throw DimensionError("moment label length does not match the table");
    }
    double e = 1.0;
    for (const auto& [b, value] : f.entries()) {
        if (b.is_subset_of(a)) {
            e *= value;
        }
    }
    return e;
}

Marginal reconstruct_marginal(const MomentTable& f, const Layout& layout, const BitVector& gamma) {
    Marginal out;
    out.support = gamma.indices();
    size_t k = out.support.size();
    if (k > kMaxOracleBits) {
        throw CapExceededError("marginal on " + std::to_string(k) + " coordinates exceeds cap");
    }
    DenseFunction chi(k);
    for (uint64_t local = 0; local < chi.size(); local++) {
        BitVector a(layout.size());
        for (size_t j = 0; j < k; j++) {
            if ((local >> j) & 1) {
                a.set(out.support[j]);
            }
        }
        chi[local] = reconstruct_moments(f, layout.bar(a));
    }
    out.dist = inverse_fourier_transform(chi);
    bool clipped = false;
    for (uint64_t e = 0; e < out.dist.size(); e++) {
        if (out.dist[e] < -1e-9) {
            clipped = true;
        }
        if (out.dist[e] < 0.0) {
            out.dist[e] = 0.0;
        }
    }
    double total = out.dist.sum();
    if (clipped || std::abs(total - 1.0) > 1e-9) {
        for (uint64_t e = 0; e < out.dist.size(); e++) {
            out.dist[e] /= total;
        }
        out.warnings.push_back("marginal on " + gamma.to_string() +
                               " had negative entries; clipped and renormalized");
    }
    return out;
}

PauliRates pauli_rates_from_moments(double ex, double ez, double ey) {
    PauliRates r;
    r.i = (1.0 + ex + ez + ey) / 4.0;
    r.x = (1.0 + ex - ez - ey) / 4.0;
    r.z = (1.0 - ex + ez - ey) / 4.0;
    r.y = (1.0 - ex - ez + ey) / 4.0;
    return r;
}

bool rates_feasible(const PauliRates& r, double tol) { return r.i >= -tol && r.x >= -tol && r.z >= -tol && r.y >= -tol; }

MomentSystem select_moment_system(const Code& code, const std::vector<BitVector>& barred_closure,
                                  const EstimationOptions& options) {
    if (code.group_rank() <= options.full_group_max_rank) {
        return build_coefficient_matrix(code, barred_closure, RowOrder::combination);
    }
    std::vector<size_t> independent = independent_rows(code.check());
    size_t rows = code.check_rows();
    std::vector<BitVector> coeffs;
    for (size_t i : independent) {
        coeffs.push_back(BitVector::from_indices(rows, {i}));
    }
    CounterRng rng(options.row_seed, 0xd5a1);
    size_t batch = std::max<size_t>(64, barred_closure.size());
    constexpr size_t kMaxRows = size_t{1} << 16;
    while (true) {
        MomentSystem ms = build_coefficient_matrix_from_rows(code, barred_closure, coeffs);
        if (ms.cols() == 0 || integer_rank(ms.cols(), ms.cols(), gram_counts(ms)) == ms.cols()) {
            return ms;
        }
        if (coeffs.size() >= kMaxRows) {
            throw IdentifiabilityError("no full-rank row subset found among " + std::to_string(coeffs.size()) +
                                       " random group elements");
        }
        for (size_t k = 0; k < batch; k++) {
            BitVector z(rows);
            for (size_t i : independent) {
                if (rng.next() & 1) {
                    z.set(i);
                }
            }
            coeffs.push_back(std::move(z));
        }
    }
}

namespace {

std::string describe_witness(const Layout& layout, const IdentifiabilityWitness& w) {
    std::ostringstream out;
    out << "supports " << w.gamma1.to_string() << " and " << w.gamma2.to_string()
        << " cover the undetectable error " << PhaseSpaceVector(layout, w.error).to_string() << " (Pauli weight "
        << w.pauli_weight << (w.is_stabilizer ? ", stabilizer element)" : ")");
    return out.str();
}

struct Prepared {
    Verdict verdict;
    std::vector<BitVector> closure;
    MomentSystem ms;
    RankCertificate certificate;
    std::vector<std::string> warnings;
};

Prepared prepare(const Code& code, const std::vector<BitVector>& supports, const EstimationOptions& options) {
    Prepared p;
    p.verdict = check_identifiability(code, supports, options.threads);
    if (!p.verdict.identifiable) {
        std::string msg = "channel supports are not identifiable: " + describe_witness(code.layout(), *p.verdict.witness);
        if (!options.override_identifiability) {
            throw IdentifiabilityError(msg);
        }
        p.warnings.push_back("OVERRIDE " + msg);
    }
    p.closure = gamma_hat(code.layout(), supports, true);
    p.ms = select_moment_system(code, p.closure, options);
    p.certificate = certify_full_rank(p.ms);
    if (!p.certificate.full_rank) {
        throw IdentifiabilityError("coefficient matrix is rank deficient: " + p.certificate.detail);
    }
    if (p.certificate.partial) {
        p.warnings.push_back("rank certificate covers a subset of " + std::to_string(p.ms.rows()) +
                             " group elements only");
    }
    return p;
}

EstimationReport finish(const Code& code, const std::vector<BitVector>& supports, Prepared p,
                        const MomentTable& moments, const EstimationOptions& options, uint64_t shots) {
    EstimationReport report;
    report.verdict = std::move(p.verdict);
    report.certificate = std::move(p.certificate);
    report.warnings = std::move(p.warnings);
    report.shots = shots;
    report.rows_used = p.ms.rows();

    SolveOptions solve = options.solve;
    solve.shots = shots;
    SolveResult solved = solve_binomial_system(p.ms, moments, solve);
    report.f_hat = std::move(solved.f);
    report.residual_norm = solved.residual_norm;
    for (auto& w : solved.warnings) {
        report.warnings.push_back(std::move(w));
    }

    const Layout& layout = code.layout();
    report.e_hat = MomentTable(layout.size());
    for (const auto& a : p.closure) {
        report.e_hat.set(a, reconstruct_moments(report.f_hat, a));
    }
    for (const auto& gamma : supports) {
        Marginal m = reconstruct_marginal(report.f_hat, layout, gamma);
        for (const auto& w : m.warnings) {
            report.warnings.push_back(w);
        }
        report.marginals.push_back(std::move(m));
    }
    for (size_t q = 0; q < layout.qubits; q++) {
        size_t x = layout.x_bit(q);
        size_t z = layout.z_bit(q);
        double ex = reconstruct_moments(report.f_hat, BitVector::from_indices(layout.size(), {x}));
        double ez = reconstruct_moments(report.f_hat, BitVector::from_indices(layout.size(), {z}));
        double ey = reconstruct_moments(report.f_hat, BitVector::from_indices(layout.size(), {x, z}));
        PauliRates r = pauli_rates_from_moments(ex, ez, ey);
        if (!rates_feasible(r)) {
            report.warnings.push_back("INFEASIBLE reconstructed Pauli rates on qubit " + std::to_string(q) +
                                      " have a negative entry");
        }
        report.pauli_rates.push_back(r);
    }
    for (size_t j = 0; j < layout.extra; j++) {
        double e = reconstruct_moments(report.f_hat, BitVector::from_indices(layout.size(), {layout.extra_bit(j)}));
        report.flip_rates.push_back((1.0 - e) / 2.0);
    }
    return report;
}

}  // namespace

EstimationReport run_estimation(const Code& code, const std::vector<BitVector>& supports, const SampleBatch& batch,
                                const EstimationOptions& options) {
    if (batch.syndrome_bits() != code.check_rows()) {
        throw DimensionError("sample batch syndrome length does not match the code");
    }
    Prepared p = prepare(code, supports, options);
    MomentTable moments = empirical_moment_table(batch, p.ms);
    return finish(code, supports, std::move(p), moments, options, batch.shots());
}

EstimationReport run_estimation_exact(const Code& code, const std::vector<BitVector>& supports,
                                      const SupportModel& model, const EstimationOptions& options) {
    if (model.layout() != code.layout()) {
        throw DimensionError("noise model and code have different layouts");
    }
    Prepared p = prepare(code, supports, options);
    MomentTable moments = exact_moment_table(model, p.ms);
    return finish(code, supports, std::move(p), moments, options, 0);
}

}  // namespace synest
