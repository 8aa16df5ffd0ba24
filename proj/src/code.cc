#include "synest/code.h"

#include <algorithm>
#include <cctype>
#include <iterator>
#include <sstream>

#include "synest/errors.h"

namespace synest {

std::string_view to_string(CodeKind kind) {
    switch (kind) {
        case CodeKind::classical:
            return "classical";
        case CodeKind::stabilizer:
            return "stabilizer";
        case CodeKind::data_syndrome:
            return "data_syndrome";
    }
    return "unknown";
}

CodeKind parse_code_kind(std::string_view text) {
    if (text == "classical") {
        return CodeKind::classical;
    }
    if (text == "stabilizer") {
        return CodeKind::stabilizer;
    }
    if (text == "data_syndrome") {
        return CodeKind::data_syndrome;
    }
    throw ParseError("unknown code kind '" + std::string(text) + "'");
}

namespace {

void require_commuting(const Layout& data_layout, const BitMatrix& generators) {
    for (size_t a = 0; a < generators.rows(); a++) {
        for (size_t b = a + 1; b < generators.rows(); b++) {
            if (data_layout.symplectic(generators.row(a), generators.row(b))) {
                throw Error("stabilizer generators " + std::to_string(a) + " and " + std::to_string(b) +
                            " anti-commute");
            }
        }
    }
}

}  // namespace

Code::Code(CodeKind kind, Layout layout, BitMatrix check, BitMatrix stabilizer, std::string name)
    : kind_(kind),
      layout_(layout),
      check_(std::move(check)),
      stabilizer_(std::move(stabilizer)),
      stabilizer_space_(stabilizer_),
      name_(std::move(name)) {
    if (check_.cols() != layout_.size()) {
        throw DimensionError("check matrix has " + std::to_string(check_.cols()) + " columns, expected " +
                             std::to_string(layout_.size()));
    }
    syndrome_matrix_ = BitMatrix(check_.rows(), layout_.size());
    for (size_t r = 0; r < check_.rows(); r++) {
        syndrome_matrix_.row(r) = layout_.bar(check_.row(r));
    }
    group_rank_ = rank(check_);
}

Code Code::classical(BitMatrix parity_check, std::string name) {
    Layout layout{0, parity_check.cols()};
    return Code(CodeKind::classical, layout, std::move(parity_check), BitMatrix(0, 0), std::move(name));
}

Code Code::stabilizer(BitMatrix generators, std::string name) {
    if (generators.cols() % 2 != 0) {
        throw DimensionError("stabilizer generators must have even length 2n");
    }
    Layout layout{generators.cols() / 2, 0};
    require_commuting(layout, generators);
    BitMatrix stabilizer = generators;
    return Code(CodeKind::stabilizer, layout, std::move(generators), std::move(stabilizer), std::move(name));
}

Code Code::stabilizer(std::span<const std::string> generators, std::string name) {
    if (generators.empty()) {
        throw DimensionError("a stabilizer code needs at least one generator");
    }
    std::vector<BitVector> rows;
    for (const auto& g : generators) {
        PhaseSpaceVector v = encode_pauli(g);
        if (!rows.empty() && v.bits().size() != rows.front().size()) {
            throw DimensionError("generators act on different numbers of qubits");
        }
        rows.push_back(v.bits());
    }
    return stabilizer(BitMatrix::from_rows(std::move(rows)), std::move(name));
}

Code Code::data_syndrome(size_t qubits, BitMatrix check, std::string name) {
    size_t m = check.rows();
    Layout layout{qubits, m};
    if (check.cols() != layout.size()) {
        throw DimensionError("data-syndrome check matrix must have 2n+m columns");
    }
    std::vector<BitVector> f_rows;
    for (size_t r = 0; r < m; r++) {
        for (size_t j = 0; j < m; j++) {
            if (check.get(r, layout.extra_bit(j)) != (r == j)) {
                throw Error("data-syndrome check matrix must have the block form [F | I_m]");
            }
        }
        f_rows.push_back(check.row(r).slice(0, 2 * qubits));
    }
    BitMatrix f = BitMatrix::from_rows(std::move(f_rows), 2 * qubits);
    require_commuting(Layout{qubits, 0}, f);
    std::vector<BitVector> independent;
    for (size_t r : independent_rows(f)) {
        independent.push_back(f.row(r));
    }
    return Code(CodeKind::data_syndrome, layout, std::move(check),
                BitMatrix::from_rows(std::move(independent), 2 * qubits), std::move(name));
}

BitVector Code::syndrome(const BitVector& e) const {
    if (e.size() != layout_.size()) {
        throw DimensionError("error has length " + std::to_string(e.size()) + ", code expects " +
                             std::to_string(layout_.size()));
    }
    return syndrome_matrix_.multiply(e);
}

bool Code::is_stabilizer_element(const BitVector& e) const {
    if (e.size() != layout_.size()) {
        throw DimensionError("error length does not match code");
    }
    for (size_t j = 0; j < layout_.extra; j++) {
        if (e.get(layout_.extra_bit(j))) {
            return false;
        }
    }
    if (layout_.qubits == 0) {
        return e.none();
    }
    return stabilizer_space_.contains(e.slice(0, 2 * layout_.qubits));
}

Code build_data_syndrome(const Code& base, const BitMatrix& extra_columns) {
    if (base.kind() != CodeKind::stabilizer) {
        throw Error("data-syndrome extension requires a stabilizer base code");
    }
    const BitMatrix& g = base.check();
    size_t l = g.rows();
    if (extra_columns.rows() != l && !(extra_columns.rows() == 0 && extra_columns.cols() == 0)) {
        throw DimensionError("extra measurement columns must have one row per generator (" + std::to_string(l) +
                             ")");
    }
    size_t extra = extra_columns.rows() == 0 ? 0 : extra_columns.cols();
    size_t m = l + extra;
    size_t n = base.layout().qubits;
    BitMatrix check(m, 2 * n + m);
    for (size_t i = 0; i < m; i++) {
        BitVector f(2 * n);
        if (i < l) {
            f = g.row(i);
        } else {
            for (size_t j = 0; j < l; j++) {
                if (extra_columns.get(j, i - l)) {
                    f ^= g.row(j);
                }
            }
        }
        for (size_t c : f.indices()) {
            check.set(i, c);
        }
        check.set(i, 2 * n + i);
    }
    return Code::data_syndrome(n, std::move(check), base.name() + "+ds" + std::to_string(m));
}

namespace {

// One candidate letter at one site: its coordinates and syndrome words.
struct SiteOption {
    BitVector error;
    std::vector<uint64_t> syndrome;
};

struct DistanceSearcher {
    const Code& code;
    bool pure;
    size_t words;
    std::vector<std::vector<SiteOption>> options;

    DistanceSearcher(const Code& c, bool pure_search) : code(c), pure(pure_search) {
        const Layout& layout = code.layout();
        words = (code.check_rows() + 63) / 64;
        auto make = [&](BitVector e) {
            SiteOption o{std::move(e), std::vector<uint64_t>(words, 0)};
            BitVector s = code.syndrome(o.error);
            std::copy(s.words().begin(), s.words().end(), o.syndrome.begin());
            return o;
        };
        for (size_t q = 0; q < layout.qubits; q++) {
            BitVector x = BitVector::from_indices(layout.size(), {layout.x_bit(q)});
            BitVector z = BitVector::from_indices(layout.size(), {layout.z_bit(q)});
            options.push_back({make(x), make(z), make(x | z)});
        }
        for (size_t j = 0; j < layout.extra; j++) {
            options.push_back({make(BitVector::from_indices(layout.size(), {layout.extra_bit(j)}))});
        }
    }

    // Number of weight-w candidates: coefficient of x^w in prod(1 + |options| x).
    double candidates(size_t w) const {
        std::vector<double> poly(w + 1, 0.0);
        poly[0] = 1.0;
        for (const auto& site : options) {
            for (size_t k = w; k >= 1; k--) {
                poly[k] += poly[k - 1] * static_cast<double>(site.size());
            }
        }
        return poly[w];
    }

    bool accept(const BitVector& e) const { return pure || !code.is_stabilizer_element(e); }

    std::optional<BitVector> search(size_t w) const {
        std::vector<size_t> chosen_site;
        std::vector<size_t> chosen_option;
        std::vector<uint64_t> acc(words, 0);
        std::optional<BitVector> found;
        recurse(0, w, chosen_site, chosen_option, acc, found);
        return found;
    }

    void recurse(size_t start, size_t remaining, std::vector<size_t>& sites, std::vector<size_t>& opts,
                 std::vector<uint64_t>& acc, std::optional<BitVector>& found) const {
        if (found) {
            return;
        }
        if (remaining == 0) {
            if (std::any_of(acc.begin(), acc.end(), [](uint64_t v) { return v != 0; })) {
                return;
            }
            BitVector e(code.layout().size());
            for (size_t k = 0; k < sites.size(); k++) {
                e ^= options[sites[k]][opts[k]].error;
            }
            if (accept(e)) {
                found = std::move(e);
            }
            return;
        }
        for (size_t s = start; s + remaining <= options.size(); s++) {
            for (size_t o = 0; o < options[s].size(); o++) {
                const auto& syn = options[s][o].syndrome;
                for (size_t k = 0; k < words; k++) {
                    acc[k] ^= syn[k];
                }
                sites.push_back(s);
                opts.push_back(o);
                recurse(s + 1, remaining - 1, sites, opts, acc, found);
                sites.pop_back();
                opts.pop_back();
                for (size_t k = 0; k < words; k++) {
                    acc[k] ^= syn[k];
                }
                if (found) {
                    return;
                }
            }
        }
    }
};

DistanceResult run_distance_search(const Code& code, const DistanceSearch& search, bool pure) {
    if (search.max_weight < 1) {
        throw Error("distance search needs max_weight >= 1");
    }
    DistanceSearcher searcher(code, pure);
    DistanceResult result;
    size_t top = std::min(search.max_weight, code.layout().sites());
    for (size_t w = 1; w <= top; w++) {
        if (searcher.candidates(w) > static_cast<double>(search.max_candidates)) {
            throw CapExceededError("distance search at weight " + std::to_string(w) + " exceeds candidate cap " +
                                   std::to_string(search.max_candidates) + "; distance is at least " +
                                   std::to_string(w));
        }
        if (auto e = searcher.search(w)) {
            result.value = w;
            result.searched_weight = w;
            result.witness = std::move(e);
            return result;
        }
        result.searched_weight = w;
    }
    return result;
}

}  // namespace

DistanceResult distance(const Code& code, const DistanceSearch& search) {
    return run_distance_search(code, search, false);
}

DistanceResult pure_distance(const Code& code, const DistanceSearch& search) {
    return run_distance_search(code, search, true);
}

bool is_detectable_support(const Code& code, const BitVector& support) {
    if (support.size() != code.ambient_size()) {
        throw DimensionError("support length does not match code");
    }
    std::vector<size_t> cols = support.indices();
    return columns_independent(code.syndrome_matrix(), cols);
}

std::optional<BitVector> undetectable_error_in(const Code& code, const BitVector& support) {
    if (support.size() != code.ambient_size()) {
        throw DimensionError("support length does not match code");
    }
    std::vector<size_t> cols = support.indices();
    if (cols.empty()) {
        return std::nullopt;
    }
    std::vector<BitVector> kernel = nullspace(code.syndrome_matrix().select_columns(cols));
    if (kernel.empty()) {
        return std::nullopt;
    }
    // Lowest Pauli weight kernel element, preferring stabilizer elements on ties.
    // Kernel dimension is tiny for the supports this is used on.
    const Layout& layout = code.layout();
    std::optional<BitVector> best;
    size_t best_weight = 0;
    bool best_stab = false;
    size_t dim = std::min<size_t>(kernel.size(), 16);
    for (size_t k = 1; k < (size_t{1} << dim); k++) {
        BitVector local(cols.size());
        for (size_t b = 0; b < dim; b++) {
            if ((k >> b) & 1) {
                local ^= kernel[b];
            }
        }
        BitVector e(layout.size());
        for (size_t i : local.indices()) {
            e.set(cols[i]);
        }
        size_t w = layout.pauli_weight(e);
        bool stab = code.is_stabilizer_element(e);
        if (!best || w < best_weight || (w == best_weight && stab && !best_stab)) {
            best = e;
            best_weight = w;
            best_stab = stab;
        }
    }
    return best;
}

Code repetition_code(size_t n) {
    if (n < 2) {
        throw Error("repetition code needs n >= 2");
    }
    BitMatrix h(n - 1, n);
    for (size_t i = 0; i + 1 < n; i++) {
        h.set(i, i);
        h.set(i, i + 1);
    }
    return Code::classical(std::move(h), "repetition(" + std::to_string(n) + ")");
}

Code hamming74_code() {
    BitMatrix h = BitMatrix::parse("3 7\n1010101\n0110011\n0001111\n");
    return Code::classical(std::move(h), "hamming74");
}

Code five_qubit_code() {
    std::vector<std::string> g{"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"};
    return Code::stabilizer(g, "five_qubit");
}

Code steane_code() {
    std::vector<std::string> rows{"1010101", "0110011", "0001111"};
    std::vector<std::string> g;
    for (char letter : {'X', 'Z'}) {
        for (const auto& r : rows) {
            std::string p(7, 'I');
            for (size_t i = 0; i < 7; i++) {
                if (r[i] == '1') {
                    p[i] = letter;
                }
            }
            g.push_back(p);
        }
    }
    return Code::stabilizer(g, "steane");
}

Code toric_code(size_t L) {
    if (L < 2) {
        throw Error("toric code needs L >= 2");
    }
    size_t n = 2 * L * L;
    auto h = [&](size_t i, size_t j) { return (i % L) * L + (j % L); };
    auto v = [&](size_t i, size_t j) { return L * L + (i % L) * L + (j % L); };
    std::vector<BitVector> rows;
    for (size_t k = 0; k + 1 < L * L; k++) {
        size_t i = k / L;
        size_t j = k % L;
        BitVector star(2 * n);
        for (size_t e : {h(i, j), h(i, j + L - 1), v(i, j), v(i + L - 1, j)}) {
            star.set(e);
        }
        rows.push_back(std::move(star));
    }
    for (size_t k = 0; k + 1 < L * L; k++) {
        size_t i = k / L;
        size_t j = k % L;
        BitVector plaquette(2 * n);
        for (size_t e : {h(i, j), h(i + 1, j), v(i, j), v(i, j + 1)}) {
            plaquette.set(n + e);
        }
        rows.push_back(std::move(plaquette));
    }
    return Code::stabilizer(BitMatrix::from_rows(std::move(rows)), "toric(" + std::to_string(L) + ")");
}

Code catalog_code(std::string_view name, const CatalogParams& params) {
    if (name == "repetition") {
        return repetition_code(params.n);
    }
    if (name == "hamming74") {
        return hamming74_code();
    }
    if (name == "five_qubit") {
        return five_qubit_code();
    }
    if (name == "steane") {
        return steane_code();
    }
    if (name == "toric") {
        return toric_code(params.L);
    }
    throw ParseError("unknown catalog code '" + std::string(name) + "'");
}

Code parse_code(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string kind_text;
    size_t n = 0;
    size_t m = 0;
    if (!(in >> kind_text >> n >> m)) {
        throw ParseError("code header must be \"kind n m\"");
    }
    CodeKind kind = parse_code_kind(kind_text);
    std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    size_t first = rest.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        throw ParseError("code file has no check matrix");
    }
    if (kind == CodeKind::stabilizer && !std::isdigit(static_cast<unsigned char>(rest[first]))) {
        std::istringstream lines(rest);
        std::vector<std::string> generators;
        std::string g;
        while (lines >> g) {
            generators.push_back(g);
        }
        Code code = Code::stabilizer(generators);
        if (code.n() != n) {
            throw ParseError("generators act on " + std::to_string(code.n()) + " qubits, header says " +
                             std::to_string(n));
        }
        return code;
    }
    BitMatrix check = BitMatrix::parse(rest);
    switch (kind) {
        case CodeKind::classical:
            if (check.cols() != n) {
                throw ParseError("classical check matrix must have n columns");
            }
            return Code::classical(std::move(check));
        case CodeKind::stabilizer:
            if (check.cols() != 2 * n) {
                throw ParseError("stabilizer check matrix must have 2n columns");
            }
            return Code::stabilizer(std::move(check));
        case CodeKind::data_syndrome:
            if (check.rows() != m) {
                throw ParseError("data-syndrome check matrix must have m rows");
            }
            return Code::data_syndrome(n, std::move(check));
    }
    throw ParseError("unreachable code kind");
}

std::string format_code(const Code& code) {
    return std::string(to_string(code.kind())) + " " + std::to_string(code.n()) + " " + std::to_string(code.m()) +
           "\n" + code.check().to_text();
}

}  // namespace synest
