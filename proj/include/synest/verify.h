#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "synest/code.h"
#include "synest/noise.h"

namespace synest {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;

    bool pass() const;
};

/// Every coordinate set gamma with |gamma| <= max_size is uniform under the
/// group exactly when bar(gamma) is a detectable support.
SuiteResult verify_orthogonal_array(const Code& code, size_t max_size = 4);

/// Leading principal minors of M_t are positive and M_t is symmetric.
SuiteResult verify_intersection_matrix(size_t n, size_t t);

/// Schur chain stages against the closed form, plus the last stage and its
/// inverse against the rank-one formulas.
SuiteResult verify_schur_chain(size_t n, size_t t);

/// Random classical codes and support families: full rank of D, the pairwise
/// union condition and its closure form must all agree.
SuiteResult verify_theorem2(size_t trials, size_t max_n, uint64_t seed);

/// The sign-symmetry basis spans the whole F_2 nullspace of D (brute force
/// for small column counts) and each basis flip preserves every group moment.
SuiteResult verify_symmetries(const Code& code, size_t t, SupportMetric metric);

}  // namespace synest
