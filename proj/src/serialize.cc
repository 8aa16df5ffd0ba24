#include "synest/serialize.h"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "synest/errors.h"

namespace synest {

std::string fnv1a_hex(std::string_view data) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json subset_to_json(const BitVector& v) { return Json(v.indices()); }

BitVector subset_from_json(const Json& j, size_t ambient) {
    if (!j.is_array()) {
        throw ParseError("subset must be an array of indices");
    }
    BitVector v(ambient);
    for (const auto& x : j) {
        if (!x.is_number_unsigned() || x.get<size_t>() >= ambient) {
            throw ParseError("subset index out of range: " + x.dump());
        }
        v.set(x.get<size_t>());
    }
    return v;
}

Json moment_table_to_json(const MomentTable& table) {
    Json out = Json::array();
    for (const auto& [label, value] : table.entries()) {
        out.push_back({{"subset", subset_to_json(label)}, {"value", value}});
    }
    return out;
}

MomentTable moment_table_from_json(const Json& records, size_t ambient) {
    if (!records.is_array()) {
        throw ParseError("moment table must be an array of records");
    }
    MomentTable table(ambient);
    for (const auto& r : records) {
        if (!r.is_object() || r.size() != 2 || !r.contains("subset") || !r.contains("value") ||
            !r.at("value").is_number()) {
            throw ParseError("moment record must have exactly the fields subset and value");
        }
        table.set(subset_from_json(r.at("subset"), ambient), r.at("value").get<double>());
    }
    return table;
}

Json certificate_to_json(const RankCertificate& cert) {
    return {{"full_rank", cert.full_rank},
            {"rank", cert.rank},
            {"columns", cert.columns},
            {"method", cert.method},
            {"intersection_certificate", cert.intersection_certificate},
            {"partial", cert.partial},
            {"float_rank", cert.float_rank},
            {"detail", cert.detail}};
}

Json witness_to_json(const Layout& layout, const IdentifiabilityWitness& w) {
    return {{"gamma1", subset_to_json(w.gamma1)},
            {"gamma2", subset_to_json(w.gamma2)},
            {"error", subset_to_json(w.error)},
            {"error_pauli", PhaseSpaceVector(layout, w.error).to_string()},
            {"pauli_weight", w.pauli_weight},
            {"is_stabilizer", w.is_stabilizer}};
}

Json verdict_to_json(const Layout& layout, const Verdict& verdict, const std::optional<bool>& equivalent_condition,
                     const std::optional<MomentSystem>& ms, const std::optional<RankCertificate>& cert) {
    Json out;
    out["identifiable"] = verdict.identifiable;
    out["witness"] = verdict.witness ? witness_to_json(layout, *verdict.witness) : Json(nullptr);
    out["pairs_checked"] = verdict.pairs_checked;
    out["failing_pairs"] = verdict.failing_pairs;
    out["equivalent_condition"] = equivalent_condition ? Json(*equivalent_condition) : Json(nullptr);
    if (ms) {
        out["dims"] = {{"rows", ms->rows()}, {"cols", ms->cols()}};
        Json basis = Json::array();
        for (const auto& v : sign_symmetries(*ms)) {
            Json labels = Json::array();
            for (size_t c : v.indices()) {
                labels.push_back(subset_to_json(ms->col_labels[c]));
            }
            basis.push_back(std::move(labels));
        }
        out["symmetry_basis"] = std::move(basis);
    } else {
        out["dims"] = nullptr;
        out["symmetry_basis"] = nullptr;
    }
    if (cert) {
        out["rank"] = cert->rank;
        out["certificate"] = certificate_to_json(*cert);
    } else {
        out["rank"] = nullptr;
        out["certificate"] = nullptr;
    }
    return out;
}

Json report_to_json(const EstimationReport& report) {
    Json out;
    out["f_moments"] = moment_table_to_json(report.f_hat);
    out["e_moments"] = moment_table_to_json(report.e_hat);
    Json marginals = Json::array();
    for (const auto& m : report.marginals) {
        marginals.push_back({{"support", m.support}, {"dist", m.dist.values()}});
    }
    out["marginals"] = std::move(marginals);
    Json rates = Json::array();
    for (size_t q = 0; q < report.pauli_rates.size(); q++) {
        const auto& r = report.pauli_rates[q];
        rates.push_back({{"qubit", q}, {"p_I", r.i}, {"p_X", r.x}, {"p_Z", r.z}, {"p_Y", r.y}});
    }
    out["pauli_rates"] = std::move(rates);
    out["flip_rates"] = report.flip_rates;
    out["residual"] = report.residual_norm;
    out["rows_used"] = report.rows_used;
    out["shots"] = report.shots;
    out["warnings"] = report.warnings;
    out["certificate"] = certificate_to_json(report.certificate);
    return out;
}

std::string rates_csv(const EstimationReport& report) {
    std::ostringstream out;
    out.precision(17);
    if (!report.pauli_rates.empty()) {
        out << "qubit,p_I,p_X,p_Z,p_Y\n";
        for (size_t q = 0; q < report.pauli_rates.size(); q++) {
            const auto& r = report.pauli_rates[q];
            out << q << ',' << r.i << ',' << r.x << ',' << r.z << ',' << r.y << '\n';
        }
    }
    if (!report.flip_rates.empty()) {
        out << "bit,p_flip\n";
        for (size_t j = 0; j < report.flip_rates.size(); j++) {
            out << j << ',' << report.flip_rates[j] << '\n';
        }
    }
    return out.str();
}

namespace {

std::vector<double> read_probabilities(const Json& j, const char* field) {
    if (!j.is_array()) {
        throw ParseError(std::string(field) + " must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& x : j) {
        if (!x.is_number()) {
            throw ParseError(std::string(field) + " must be an array of numbers");
        }
        out.push_back(x.get<double>());
    }
    return out;
}

PauliRates read_pauli(const Json& j) {
    auto p = read_probabilities(j, "pauli");
    if (p.size() != 4) {
        throw ParseError("pauli rates need exactly four values (p_I, p_X, p_Z, p_Y)");
    }
    return {p[0], p[1], p[2], p[3]};
}

size_t read_index(const Json& j, const char* field) {
    if (!j.is_number_unsigned()) {
        throw ParseError(std::string(field) + " must be a non-negative integer");
    }
    return j.get<size_t>();
}

void require_keys(const Json& channel, std::set<std::string> allowed) {
    for (const auto& [key, value] : channel.items()) {
        if (!allowed.count(key)) {
            throw ParseError("unknown channel field \"" + key + "\"");
        }
    }
    for (const auto& key : allowed) {
        if (!channel.contains(key)) {
            throw ParseError("channel is missing field \"" + key + "\"");
        }
    }
}

}  // namespace

void add_channel_from_json(SupportModel& model, const Json& channel) {
    if (!channel.is_object()) {
        throw ParseError("channel must be an object");
    }
    const Layout& layout = model.layout();
    if (channel.contains("qubit")) {
        require_keys(channel, {"qubit", "pauli"});
        size_t q = read_index(channel.at("qubit"), "qubit");
        if (q >= layout.qubits) {
            throw ParseError("qubit index " + std::to_string(q) + " out of range");
        }
        model.add_pauli_channel(q, read_pauli(channel.at("pauli")));
        return;
    }
    if (channel.contains("bit")) {
        require_keys(channel, {"bit", "flip"});
        size_t j = read_index(channel.at("bit"), "bit");
        if (j >= layout.extra) {
            throw ParseError("classical bit index " + std::to_string(j) + " out of range");
        }
        if (!channel.at("flip").is_number()) {
            throw ParseError("flip must be a number");
        }
        model.add_flip_channel(layout.extra_bit(j), channel.at("flip").get<double>());
        return;
    }
    if (channel.contains("pauli")) {
        require_keys(channel, {"support", "pauli"});
        BitVector s = subset_from_json(channel.at("support"), layout.size());
        auto idx = s.indices();
        if (idx.size() != 2 || idx[0] >= layout.qubits || idx[1] != layout.z_bit(idx[0])) {
            throw ParseError("a pauli channel support must be the x- and z-bit of one qubit");
        }
        model.add_pauli_channel(idx[0], read_pauli(channel.at("pauli")));
        return;
    }
    require_keys(channel, {"support", "dist"});
    const Json& support = channel.at("support");
    if (!support.is_array()) {
        throw ParseError("support must be an array of indices");
    }
    std::vector<size_t> idx;
    for (const auto& x : support) {
        size_t i = read_index(x, "support index");
        if (i >= layout.size()) {
            throw ParseError("support index " + std::to_string(i) + " out of range");
        }
        idx.push_back(i);
    }
    // Dist entries are indexed by the support in the order given; the model
    // stores supports sorted, so permute the table accordingly.
    std::vector<double> dist = read_probabilities(channel.at("dist"), "dist");
    if (dist.size() != (size_t{1} << idx.size())) {
        throw ParseError("dist needs 2^|support| = " + std::to_string(size_t{1} << idx.size()) + " entries");
    }
    std::vector<size_t> sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> permuted(dist.size());
    for (size_t k = 0; k < dist.size(); k++) {
        size_t local = 0;
        for (size_t j = 0; j < idx.size(); j++) {
            if ((k >> j) & 1) {
                size_t pos = static_cast<size_t>(std::lower_bound(sorted.begin(), sorted.end(), idx[j]) - sorted.begin());
                local |= size_t{1} << pos;
            }
        }
        permuted[local] = dist[k];
    }
    model.add_channel(idx, std::move(permuted));
}

SupportModel model_from_json(const Layout& layout, const Json& channels) {
    if (!channels.is_array()) {
        throw ParseError("channels must be an array");
    }
    SupportModel model(layout);
    for (const auto& c : channels) {
        try {
            add_channel_from_json(model, c);
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(std::string("invalid channel: ") + e.what());
        }
    }
    return model;
}

Json model_to_json(const SupportModel& model) {
    Json out = Json::array();
    for (const auto& c : model.channels()) {
        out.push_back({{"support", c.support}, {"dist", c.dist}});
    }
    return out;
}

}  // namespace synest
