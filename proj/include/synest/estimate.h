#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synest/code.h"
#include "synest/fourier.h"
#include "synest/identify.h"
#include "synest/noise.h"

namespace synest {

/// Ê(s) = (1/K) sum_k (-1)^(zeta . sigma_k) for each coefficient vector
/// zeta over the check rows. Uses a Walsh-Hadamard transform of the syndrome
/// histogram when the syndrome has at most 24 bits.
std::vector<double> empirical_moments(const SampleBatch& batch, const std::vector<BitVector>& row_coeffs);

/// Empirical moments keyed by the group elements labelling the rows of ms.
MomentTable empirical_moment_table(const SampleBatch& batch, const MomentSystem& ms);

/// Exact moments E(s) of a noise model for every row of ms.
MomentTable exact_moment_table(const SupportModel& model, const MomentSystem& ms);

enum class Weighting {
    unweighted,
    /// Row weight K / (1 - Ê(s)^2), the inverse delta-method variance of
    /// log Ê(s).
    variance,
};

enum class NonPositivePolicy {
    error,
    /// Replace Ê(s) <= 0 by 10 / K and record a warning.
    clamp,
};

struct SolveOptions {
    Weighting weighting = Weighting::unweighted;
    NonPositivePolicy non_positive = NonPositivePolicy::error;
    /// Shot count behind the moments; needed for clamping and weighting.
    uint64_t shots = 0;
};

struct SolveResult {
    /// F(b) for every column label b.
    MomentTable f;
    /// Euclidean norm of D x - log Ê over the rows (unweighted).
    double residual_norm = 0.0;
    std::vector<std::string> warnings;
};

/// Least squares on log E(s) = sum_{b subset of s} log F(b) through the
/// normal equations. Throws NonPositiveMomentError naming the offending rows
/// when some Ê(s) <= 0 under the error policy, and IdentifiabilityError when
/// D is rank deficient.
SolveResult solve_binomial_system(const MomentSystem& ms, const MomentTable& moments, const SolveOptions& options = {});

/// E(a) = product of F(b) over the entries b of f with b subset of a.
double reconstruct_moments(const MomentTable& f, const BitVector& a);

struct Marginal {
    /// Local outcome bit j corresponds to coordinate support[j].
    std::vector<size_t> support;
    DenseFunction dist;
    std::vector<std::string> warnings;
};

/// Q(e) = 2^-|gamma| sum_{a subset of gamma} E(bar a) (-1)^(a.e), with E
/// reconstructed from f. Negative entries beyond 1e-9 are clipped and the
/// result renormalized, with a warning.
Marginal reconstruct_marginal(const MomentTable& f, const Layout& layout, const BitVector& gamma);

/// Inverts E_X = p_I + p_X - p_Z - p_Y and its Z and Y counterparts.
PauliRates pauli_rates_from_moments(double ex, double ez, double ey);
bool rates_feasible(const PauliRates& r, double tol = 1e-12);

struct EstimationReport {
    MomentTable f_hat;
    MomentTable e_hat;
    std::vector<Marginal> marginals;
    /// Per qubit; empty for classical codes.
    std::vector<PauliRates> pauli_rates;
    /// Flip rate of each classical coordinate (measurement bits or classical
    /// code bits).
    std::vector<double> flip_rates;
    double residual_norm = 0.0;
    size_t rows_used = 0;
    uint64_t shots = 0;
    std::vector<std::string> warnings;
    RankCertificate certificate;
    Verdict verdict;
};

struct EstimationOptions {
    SolveOptions solve;
    /// Proceed (with a warning) when the support condition fails.
    bool override_identifiability = false;
    /// Use every group element as a row up to this group rank; larger groups
    /// use generators plus random products.
    size_t full_group_max_rank = 20;
    uint64_t row_seed = 0;
    size_t threads = 0;
};

/// Full pipeline on sampled syndromes.
EstimationReport run_estimation(const Code& code, const std::vector<BitVector>& supports, const SampleBatch& batch,
                                const EstimationOptions& options = {});
/// Full pipeline on exact moments of a model.
EstimationReport run_estimation_exact(const Code& code, const std::vector<BitVector>& supports,
                                      const SupportModel& model, const EstimationOptions& options = {});

/// Row selection used by the estimators: the full group for small groups,
/// otherwise generators plus random products until D^T D has full rank.
MomentSystem select_moment_system(const Code& code, const std::vector<BitVector>& barred_closure,
                                  const EstimationOptions& options);

}  // namespace synest
