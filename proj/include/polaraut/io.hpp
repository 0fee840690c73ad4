#pragma once

// JSON and CSV serialization of codes, maps, permutations and reports.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "affine.hpp"
#include "autgroup.hpp"
#include "decode.hpp"
#include "monomial.hpp"

namespace polaraut {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// CodeSpec: { "n", "K", "construction": "bec"|"pw"|"explicit", "erasure_prob"?, "m_min_masks"? }

inline json masks_json(const MonomialSet& m) { return json(m.masks()); }

inline json to_json(const CodeSpec& spec)
{
    json j;
    j["n"] = spec.n;
    j["K"] = spec.K();
    j["construction"] = to_string(spec.construction);
    if (spec.erasure_prob) j["erasure_prob"] = *spec.erasure_prob;
    j["m_min_masks"] = masks_json(minimal_generators(spec.info));
    return j;
}

inline CodeSpec code_from_json(const json& j)
{
    if (!j.is_object()) throw std::invalid_argument("code spec must be a JSON object");
    if (!j.contains("n") || !j["n"].is_number_integer()) throw std::invalid_argument("code spec: integer field 'n' is required");
    const int n = j["n"].get<int>();
    check_variable_count(n);
    const std::string kind = j.value("construction", std::string("explicit"));
    const bool has_k = j.contains("K");
    if (has_k && !j["K"].is_number_integer()) throw std::invalid_argument("code spec: 'K' must be an integer");
    CodeSpec spec;
    if (kind == "bec") {
        if (!has_k) throw std::invalid_argument("code spec: 'K' is required for bec");
        if (!j.contains("erasure_prob")) throw std::invalid_argument("code spec: 'erasure_prob' is required for bec");
        spec = construct_bec(n, j["K"].get<std::size_t>(), j["erasure_prob"].get<double>());
    } else if (kind == "pw") {
        if (!has_k) throw std::invalid_argument("code spec: 'K' is required for pw");
        spec = construct_pw(n, j["K"].get<std::size_t>());
    } else if (kind == "explicit") {
        if (!j.contains("m_min_masks") || !j["m_min_masks"].is_array())
            throw std::invalid_argument("code spec: 'm_min_masks' array is required for explicit codes");
        spec = code_from_generators(MonomialSet(n, j["m_min_masks"].get<std::vector<std::uint32_t>>()));
        if (has_k && j["K"].get<std::size_t>() != spec.K())
            throw std::invalid_argument("code spec: K = " + std::to_string(j["K"].get<std::size_t>()) +
                                        " does not match the closure size " + std::to_string(spec.K()));
    } else {
        throw std::invalid_argument("code spec: unknown construction '" + kind + "'");
    }
    return spec;
}

/// Accepts inline JSON text or a path to a JSON file.
inline json load_json_arg(const std::string& text_or_path)
{
    const auto first = text_or_path.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (text_or_path[first] == '{' || text_or_path[first] == '['))
        return json::parse(text_or_path);
    std::ifstream in(text_or_path);
    if (!in) throw std::invalid_argument("cannot open '" + text_or_path + "'");
    return json::parse(in);
}

// ---------------------------------------------------------------------------
// Affine maps: { "A": [row masks], "b": mask }

inline json to_json(const AffineMap& t)
{
    json rows = json::array();
    for (int m = 0; m < t.n(); ++m) rows.push_back(t.row_mask(m));
    return json{{"A", rows}, {"b", t.b_mask()}};
}

inline AffineMap affine_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("A")) throw std::invalid_argument("affine map: field 'A' is required");
    const auto rows = j["A"].get<std::vector<std::uint64_t>>();
    const std::size_t n = rows.size();
    const std::uint64_t b = j.value("b", std::uint64_t{0});
    return {BitMatrix::from_row_masks(std::span<const std::uint64_t>(rows), n), BitVec::from_mask(b, n)};
}

inline json to_json(const PositionPermutation& p) { return json(p.forward()); }

inline json to_json(const BlockProfile& s) { return json(s.sizes()); }

inline json rows_json(const BitMatrix& a) { return json(a.row_masks()); }

// ---------------------------------------------------------------------------
// Reports

inline json to_json(const Theorem1Report& r)
{
    json j;
    j["code"] = r.code;
    j["n"] = r.n;
    j["K"] = r.K;
    j["profile"] = to_json(r.profile);
    j["aut_count"] = r.aut_count;
    j["blta_count"] = r.blta_count.convert_to<std::uint64_t>();
    j["pass"] = r.pass;
    if (r.counterexample) j["counterexample"] = *r.counterexample;
    return j;
}

inline json to_json(const ElementaryOp& op)
{
    return json{{"op", op.kind == ElementaryOp::Kind::AddColumn ? "addcol" : "addrow"}, {"src", op.src}, {"dst", op.dst}};
}

inline json to_json(const WitnessTrace& tr)
{
    json j;
    j["n"] = tr.n;
    j["i"] = tr.i;
    j["start"] = rows_json(tr.start);
    json ops = json::array();
    for (const auto& op : tr.operations()) ops.push_back(to_json(op));
    j["operations"] = ops;
    json mons = json::array();
    for (const auto& w : tr.monomials) {
        json m;
        m["monomial"] = w.monomial;
        m["image"] = w.image;
        m["case"] = w.case_tag;
        json steps = json::array();
        for (const auto& st : w.steps) {
            json s;
            s["target"] = st.target;
            s["rank"] = st.rank;
            s["rank_bound"] = st.rank_bound;
            s["row"] = st.row;
            s["col"] = st.col;
            s["op"] = st.op ? to_json(*st.op) : json(nullptr);
            s["minor_rows"] = st.minor_rows;
            s["minor_cols"] = st.minor_cols;
            s["minor_nonsingular"] = st.minor_nonsingular;
            s["invertible"] = st.invertible;
            s["in_aut"] = st.in_aut;
            steps.push_back(s);
        }
        m["steps"] = steps;
        m["source"] = w.source;
        m["source_in_M"] = w.source_in_m;
        m["coefficient"] = w.coefficient;
        m["image_in_support"] = w.image_in_support;
        m["ok"] = w.ok;
        if (!w.failure.empty()) m["failure"] = w.failure;
        mons.push_back(m);
    }
    j["monomials"] = mons;
    j["direct_cases"] = tr.direct_cases;
    j["direct_cases_ok"] = tr.direct_cases_ok;
    j["transposition_verified"] = tr.transposition_verified;
    j["verdict"] = tr.verdict;
    if (!tr.failure.empty()) j["failure"] = tr.failure;
    return j;
}

inline json to_json(const ReductionResult& r)
{
    json j;
    j["i"] = r.i;
    j["j"] = r.j;
    j["start"] = to_json(r.start);
    j["linear"] = rows_json(r.linear);
    j["filled"] = rows_json(r.filled);
    json ops = json::array();
    for (const auto& op : r.ops) ops.push_back(to_json(op));
    j["operations"] = ops;
    j["intermediates_ok"] = r.intermediates_ok;
    json traces = json::array();
    for (const auto& t : r.traces) traces.push_back(to_json(t));
    j["traces"] = traces;
    json chain = json::array();
    for (auto [p, q] : r.chain) chain.push_back(json::array({p, q}));
    j["chain"] = chain;
    j["chain_is_ij"] = r.chain_is_ij;
    j["chain_preserves"] = r.chain_preserves;
    j["transposition_verified"] = r.transposition_verified;
    j["holds"] = r.holds;
    if (!r.failure.empty()) j["failure"] = r.failure;
    return j;
}

// ---------------------------------------------------------------------------
// Simulation CSV

inline std::string csv_header() { return "frame_count,errors,bler,wilson_lo,wilson_hi,snr_db_or_epsilon,decoder,L,seed"; }

inline std::string csv_row(const SimStats& s, double point, const DecoderConfig& dec)
{
    std::ostringstream os;
    os << s.frames << ',' << s.errors << ',' << std::setprecision(9) << s.bler << ',' << s.wilson_lo << ','
       << s.wilson_hi << ',' << point << ',' << dec.name() << ',' << dec.L() << ',' << s.seed;
    return os.str();
}

} // namespace polaraut
