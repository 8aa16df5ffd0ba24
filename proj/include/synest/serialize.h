#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "synest/code.h"
#include "synest/estimate.h"
#include "synest/fourier.h"
#include "synest/identify.h"
#include "synest/noise.h"

namespace synest {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

/// Records {"subset": [sorted indices], "value": v} in canonical label order.
Json moment_table_to_json(const MomentTable& table);
MomentTable moment_table_from_json(const Json& records, size_t ambient);

Json subset_to_json(const BitVector& v);
BitVector subset_from_json(const Json& j, size_t ambient);

Json certificate_to_json(const RankCertificate& cert);
Json witness_to_json(const Layout& layout, const IdentifiabilityWitness& w);

/// {identifiable, witness, rank, dims, symmetry_basis, ...}.
Json verdict_to_json(const Layout& layout, const Verdict& verdict, const std::optional<bool>& equivalent_condition,
                     const std::optional<MomentSystem>& ms, const std::optional<RankCertificate>& cert);

/// Fixed field names: f_moments, e_moments, marginals, pauli_rates,
/// flip_rates, residual, rows_used, shots, warnings, certificate.
Json report_to_json(const EstimationReport& report);

/// qubit,p_I,p_X,p_Z,p_Y rows followed by bit,p_flip rows when present.
std::string rates_csv(const EstimationReport& report);

/// One channel of a model config. Accepted forms, with no other keys:
///   {"support": [...], "dist": [2^|support| values]}
///   {"support": [x, z], "pauli": [p_I, p_X, p_Z, p_Y]}
///   {"qubit": q, "pauli": [p_I, p_X, p_Z, p_Y]}
///   {"bit": j, "flip": p}   (j indexes the classical coordinates)
void add_channel_from_json(SupportModel& model, const Json& channel);
SupportModel model_from_json(const Layout& layout, const Json& channels);
Json model_to_json(const SupportModel& model);

}  // namespace synest
