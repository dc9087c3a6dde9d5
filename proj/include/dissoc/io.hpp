#pragma once

#include <charconv>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dissoc/algebra.hpp"
#include "dissoc/basis.hpp"
#include "dissoc/construction.hpp"
#include "dissoc/dissociation.hpp"
#include "dissoc/errors.hpp"
#include "dissoc/group.hpp"
#include "dissoc/search.hpp"

namespace dissoc {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline long long parse_int(std::string_view s, const char* what) {
    s = trim(s);
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw InputError(std::string("malformed ") + what + ": '" + std::string(s) + "'");
    return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i)
        if (i == s.size() || s[i] == sep) {
            parts.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    return parts;
}

}  // namespace detail

// "free:<n>" -> Z^n; "mod:<e>^<k>" -> Z_e^k.
inline GroupSpec parse_group(const std::string& descriptor) {
    std::string_view s(descriptor);
    if (s.starts_with("free:")) {
        long long n = detail::parse_int(s.substr(5), "free rank");
        if (n < 1 || n > 64) throw InputError("free rank must be in [1, 64]");
        return GroupSpec::free_group(static_cast<std::size_t>(n));
    }
    if (s.starts_with("mod:")) {
        auto parts = detail::split(s.substr(4), '^');
        if (parts.size() != 2) throw InputError("torsion group must be written mod:<e>^<k>");
        long long e = detail::parse_int(parts[0], "modulus");
        long long k = detail::parse_int(parts[1], "torsion rank");
        if (e < 2) throw InputError("modulus must be >= 2");
        if (k < 1 || k > 64) throw InputError("torsion rank must be in [1, 64]");
        return GroupSpec::torsion(e, static_cast<std::size_t>(k));
    }
    throw InputError("group descriptor must be free:<n> or mod:<e>^<k>");
}

// Inline element list: elements separated by ';', coordinates by ','.
inline std::vector<std::vector<Coord>> parse_rows_inline(const std::string& text) {
    if (detail::trim(text).empty()) throw InputError("element list is empty");
    std::vector<std::vector<Coord>> rows;
    for (std::string_view elem : detail::split(text, ';')) {
        if (detail::trim(elem).empty()) throw InputError("empty element in list");
        std::vector<Coord> coords;
        for (std::string_view c : detail::split(elem, ','))
            coords.push_back(detail::parse_int(c, "coordinate"));
        rows.push_back(std::move(coords));
    }
    return rows;
}

// Element file: one element per line, comma-separated coordinates, '#'
// starts a comment, blank lines skipped. An empty file is the empty set.
inline std::vector<std::vector<Coord>> parse_rows_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open element file: " + path);
    std::vector<std::vector<Coord>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view s(line);
        if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = detail::trim(s);
        if (s.empty()) continue;
        std::vector<Coord> coords;
        for (std::string_view c : detail::split(s, ','))
            coords.push_back(detail::parse_int(c, "coordinate"));
        rows.push_back(std::move(coords));
    }
    return rows;
}

inline ElementSet make_set(const GroupSpec& g, const std::vector<std::vector<Coord>>& rows) {
    return ElementSet::from_raw(g, rows);
}

// --- JSON views -----------------------------------------------------------

inline Json group_json(const GroupSpec& g) {
    return Json{{"free_rank", g.free_rank()}, {"moduli", g.moduli()}};
}

inline Json element_json(const Element& e) { return Json(e.coords()); }

inline Json set_json(const ElementSet& s) {
    Json arr = Json::array();
    for (const Element& e : s) arr.push_back(element_json(e));
    return arr;
}

inline Json coeff_json(const CoefficientVector& c) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < c.size(); ++i) arr.push_back(static_cast<int>(c[i]));
    return arr;
}

inline Json mask_json(Mask mask, std::size_t k) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < k; ++i)
        if ((mask >> i) & 1) arr.push_back(i);
    return arr;
}

inline Json witness_json(const Witness& w) {
    Json j;
    j["kind"] = w.kind == Witness::Kind::null_combination ? "null_combination"
                                                          : "equal_subset_sums";
    j["c"] = coeff_json(w.as_null_combination());
    if (w.kind == Witness::Kind::equal_subset_sums) {
        j["b1"] = mask_json(w.b1, w.set_size);
        j["b2"] = mask_json(w.b2, w.set_size);
    }
    return j;
}

inline Json bound2_json(const BoundReport2& r) {
    return Json{{"size_lambda", r.size_lambda},
                {"size_m", r.size_m},
                {"lower", r.lower},
                {"upper", r.upper},
                {"upper_proof", r.upper_proof},
                {"counting_ok", r.counting_ok},
                {"upper_ok", r.upper_ok},
                {"upper_proof_ok", r.upper_proof_ok},
                {"star_ok", r.star_ok},
                {"pair_cap_ok", r.pair_cap_ok},
                {"holds", r.holds}};
}

inline Json bound3_json(const BoundReport3& r) {
    return Json{{"size_lambda", r.size_lambda}, {"rank", r.rank},
                {"exponent", r.exponent},       {"upper", r.upper},
                {"lower_ok", r.lower_ok},       {"upper_ok", r.upper_ok},
                {"holds", r.holds}};
}

inline Json orth_json(const OrthProbability& p) {
    return Json{{"numerator", p.numerator},
                {"log2_denominator", p.log2_denominator},
                {"value", p.value}};
}

inline Json union_bound_json(const UnionBoundReport& r) {
    return Json{{"m", r.m},           {"n", r.n},
                {"T", r.T},           {"sigma1", r.sigma1},
                {"sigma2", r.sigma2}, {"total", r.total},
                {"passes", r.passes}, {"exact_decided", r.exact_decided}};
}

inline Json rows_json(const RowSample& d) {
    Json arr = Json::array();
    for (std::uint32_t row : d.rows) {
        Json bits = Json::array();
        for (unsigned j = 0; j < d.m; ++j) bits.push_back((row >> j) & 1);
        arr.push_back(std::move(bits));
    }
    return arr;
}

inline Json search_json(const SearchResult& r) {
    return Json{{"size", r.size},
                {"best", set_json(r.best)},
                {"nodes_visited", r.nodes_visited},
                {"exhausted", r.exhausted}};
}

inline Json stress_json(const StressReport& r) {
    return Json{{"instances", r.instances},
                {"pairs_checked", r.pairs_checked},
                {"violations", r.violations},
                {"min_ratio", r.min_ratio},
                {"max_ratio", r.max_ratio}};
}

}  // namespace dissoc
