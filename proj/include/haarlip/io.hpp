#pragma once

// File formats: cell-value CSV with a JSON grid sidecar, little-endian binary
// step functions, and JSON/CSV exports of tables, reports and certificates.

#include "haarlip/corpus.hpp"
#include "haarlip/dyadic.hpp"
#include "haarlip/haar.hpp"
#include "haarlip/regularity.hpp"
#include "haarlip/step_function.hpp"

#include "json.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace haarlip {

using Json = nlohmann::ordered_json;

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

struct GridShape {
    int domain_exponent = 0;
    int resolution_level = 0;
};

// --- cell-value CSV ---------------------------------------------------------

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

}  // namespace detail

/// One value per line in cell order; a non-numeric first line is a header.
inline std::vector<double> read_values_csv(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto field = detail::trim(line);
        if (field.empty()) continue;
        double v = 0;
        if (!detail::parse_double(field, v)) {
            if (values.empty() && lineno == 1) continue;
            throw std::invalid_argument("csv line " + std::to_string(lineno) + ": cannot parse '" + std::string(field) +
                                        "' as a number");
        }
        values.push_back(v);
    }
    return values;
}

inline void write_values_csv(std::ostream& out, const StepFunction& f) {
    out << "value\n";
    for (double v : f.values()) out << format_double(v) << '\n';
}

inline GridShape grid_shape_from_json(const Json& j) {
    GridShape g;
    try {
        g.domain_exponent = j.at("domain_exponent").get<int>();
    } catch (const Json::exception&) {
        throw std::invalid_argument("grid metadata: field 'domain_exponent' missing or not an integer");
    }
    try {
        g.resolution_level = j.at("resolution_level").get<int>();
    } catch (const Json::exception&) {
        throw std::invalid_argument("grid metadata: field 'resolution_level' missing or not an integer");
    }
    return g;
}

inline Json to_json(const GridShape& g) {
    return Json{{"domain_exponent", g.domain_exponent}, {"resolution_level", g.resolution_level}};
}

// --- binary step functions ----------------------------------------------------
// int32 m0, int32 J, then 2^(m0+J) float64 values, all little-endian.

namespace detail {

template <class T>
void put_le(std::ostream& out, T v) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    auto bits = std::bit_cast<U>(v);
    std::array<char, sizeof(T)> bytes{};
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
    out.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(std::istream& in, const char* what) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    std::array<unsigned char, sizeof(T)> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size()))
        throw std::invalid_argument(std::string("binary step function: truncated while reading ") + what);
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<U>(bytes[i]) << (8 * i);
    return std::bit_cast<T>(bits);
}

}  // namespace detail

inline void write_binary(std::ostream& out, const StepFunction& f) {
    detail::put_le<std::int32_t>(out, f.domain_exponent());
    detail::put_le<std::int32_t>(out, f.resolution_level());
    for (double v : f.values()) detail::put_le<double>(out, v);
}

inline StepFunction read_binary(std::istream& in) {
    const auto m0 = detail::get_le<std::int32_t>(in, "domain_exponent");
    const auto J = detail::get_le<std::int32_t>(in, "resolution_level");
    if (m0 < 0 || J < -m0 || m0 + J > kMaxDepth)
        throw std::invalid_argument("binary step function: invalid header (" + std::to_string(m0) + ", " +
                                    std::to_string(J) + ")");
    std::vector<double> values(std::size_t{1} << (m0 + J));
    for (double& v : values) v = detail::get_le<double>(in, "values");
    return {m0, J, std::move(values)};
}

// --- dyadic objects -------------------------------------------------------------

inline Json to_json(const DyadicInterval& I) {
    return Json{{"level", I.level()}, {"index", I.index()}, {"left", I.left().to_string()},
                {"right", I.right().to_string()}};
}

inline DyadicInterval interval_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("level") || !j.contains("index") || !j.at("level").is_number_integer() ||
        !j.at("index").is_number_unsigned())
        throw std::invalid_argument("field 'interval' must be {\"level\": int, \"index\": nonnegative int}");
    return {j.at("level").get<std::int32_t>(), j.at("index").get<std::uint64_t>()};
}

template <class T>
Json optional_json(const std::optional<T>& v) {
    if (!v) return nullptr;
    return to_json(*v);
}

// --- coefficient tables -----------------------------------------------------------

inline Json to_json(const CoefficientTable& t) {
    Json levels = Json::array();
    for (int j = t.min_level(); j <= t.max_level(); ++j) {
        const auto row = t.level(j);
        levels.push_back(Json{{"j", j}, {"coefficients", std::vector<double>(row.begin(), row.end())}});
    }
    return Json{{"domain_exponent", t.domain_exponent()},
                {"resolution_level", t.resolution_level()},
                {"global_mean", t.global_mean()},
                {"levels", std::move(levels)}};
}

inline CoefficientTable table_from_json(const Json& j) {
    const GridShape g = grid_shape_from_json(j);
    if (!j.contains("global_mean") || !j.at("global_mean").is_number())
        throw std::invalid_argument("coefficient table: field 'global_mean' missing or not a number");
    if (!j.contains("levels") || !j.at("levels").is_array())
        throw std::invalid_argument("coefficient table: field 'levels' missing or not an array");
    std::vector<std::vector<double>> levels;
    int expected = -g.domain_exponent;
    for (const auto& lvl : j.at("levels")) {
        if (!lvl.contains("j") || lvl.at("j").get<int>() != expected)
            throw std::invalid_argument("coefficient table: field 'levels' must list j = " +
                                        std::to_string(-g.domain_exponent) + " .. " +
                                        std::to_string(g.resolution_level - 1) + " in order");
        levels.push_back(lvl.at("coefficients").get<std::vector<double>>());
        ++expected;
    }
    return {g.domain_exponent, g.resolution_level, j.at("global_mean").get<double>(), std::move(levels)};
}

/// Rows (j, k, c) for the nonzero coefficients.
inline void write_coefficients_csv(std::ostream& out, const CoefficientTable& t) {
    out << "j,k,c\n";
    for (int j = t.min_level(); j <= t.max_level(); ++j) {
        const auto row = t.level(j);
        for (std::size_t k = 0; k < row.size(); ++k)
            if (row[k] != 0.0) out << j << ',' << k << ',' << format_double(row[k]) << '\n';
    }
}

// --- regularity ---------------------------------------------------------------------

inline Json to_json(const AlphaEstimate& e) {
    return Json{{"alpha", e.alpha}, {"slope", e.slope}, {"intercept", e.intercept}, {"levels_used", e.levels_used}};
}

inline Json to_json(const std::vector<LevelMax>& rows) {
    Json out = Json::array();
    for (const auto& r : rows) out.push_back(Json{{"j", r.level}, {"max_abs_coefficient", r.max_abs}, {"k", r.index}});
    return out;
}

inline void write_level_max_csv(std::ostream& out, const std::vector<LevelMax>& rows) {
    out << "j,max_abs_coefficient\n";
    for (const auto& r : rows) out << r.level << ',' << format_double(r.max_abs) << '\n';
}

inline Json to_json(const RegularityReport& r) {
    Json j;
    j["alpha"] = r.alpha;
    j["A"] = r.A;
    j["seminorm"] = r.seminorm;
    j["c_alpha"] = r.c_alpha;
    j["chain_constant"] = r.chain_constant;
    j["lower_ok"] = r.lower_ok;
    j["upper_ok"] = r.upper_ok;
    j["chain_upper_ok"] = r.chain_upper_ok;
    j["tightness"] = r.tightness ? Json(*r.tightness) : Json(nullptr);
    j["alpha_estimate"] = optional_json(r.alpha_estimate);
    j["coefficient_witness"] = optional_json(r.coefficient_witness);
    j["seminorm_witness"] = optional_json(r.seminorm_witness);
    j["per_level_max"] = to_json(r.per_level_max);
    return j;
}

inline Json to_json(const ChainLink& l) {
    return Json{{"interval", to_json(l.interval)}, {"mean", l.mean}, {"jump", l.jump}, {"jump_bound", l.jump_bound}};
}

inline Json to_json(const TelescopingCertificate& c) {
    Json chain_x = Json::array(), chain_y = Json::array();
    for (const auto& l : c.chain_x) chain_x.push_back(to_json(l));
    for (const auto& l : c.chain_y) chain_y.push_back(to_json(l));
    const auto& k = c.checks;
    return Json{{"x", c.x.to_string()},
                {"y", c.y.to_string()},
                {"root", to_json(c.root)},
                {"delta", c.delta.to_string()},
                {"alpha", c.alpha},
                {"A", c.A},
                {"f_x", c.fx},
                {"f_y", c.fy},
                {"difference", c.difference()},
                {"terms",
                 Json{{"I", c.endpoint_x}, {"II", c.sum_x}, {"III", c.central}, {"IV", c.sum_y}, {"V", c.endpoint_y}}},
                {"total", c.total},
                {"delta_pow_alpha", c.delta_pow},
                {"central_bound", c.central_bound},
                {"chain_bound", c.chain_bound},
                {"bound", c.bound},
                {"chain_total_bound", c.chain_total_bound},
                {"checks",
                 Json{{"nested", k.nested},
                      {"links", k.links},
                      {"endpoints_exact", k.endpoints_exact},
                      {"central", k.central},
                      {"sum_x", k.sum_x},
                      {"sum_y", k.sum_y},
                      {"difference_le_total", k.difference_le_total},
                      {"total_le_chain_bound", k.total_le_chain_bound},
                      {"total_le_bound", k.total_le_bound}}},
                {"holds", c.holds()},
                {"chain_x", std::move(chain_x)},
                {"chain_y", std::move(chain_y)}};
}

// --- corpus specs ---------------------------------------------------------------------

inline Json to_json(const CorpusSpec& s) {
    Json j{{"kind", std::string(to_string(s.kind))},
           {"domain_exponent", s.domain_exponent},
           {"resolution_level", s.resolution_level}};
    if (s.interval) j["interval"] = Json{{"level", s.interval->level()}, {"index", s.interval->index()}};
    if (s.alpha) j["alpha"] = *s.alpha;
    if (s.depth) j["depth"] = *s.depth;
    if (s.amplitude) j["amplitude"] = *s.amplitude;
    if (s.seed) j["seed"] = *s.seed;
    return j;
}

inline CorpusSpec corpus_spec_from_json(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("corpus spec: expected a JSON object");
    CorpusSpec s;
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw std::invalid_argument("corpus spec: field 'kind' missing or not a string");
    s.kind = parse_corpus_kind(j.at("kind").get<std::string>());
    const GridShape g = grid_shape_from_json(j);
    s.domain_exponent = g.domain_exponent;
    s.resolution_level = g.resolution_level;
    auto number = [&](const char* field) -> std::optional<double> {
        if (!j.contains(field)) return std::nullopt;
        if (!j.at(field).is_number())
            throw std::invalid_argument(std::string("corpus spec: field '") + field + "' must be a number");
        return j.at(field).get<double>();
    };
    if (j.contains("interval")) s.interval = interval_from_json(j.at("interval"));
    s.alpha = number("alpha");
    s.amplitude = number("amplitude");
    if (j.contains("depth")) {
        if (!j.at("depth").is_number_integer())
            throw std::invalid_argument("corpus spec: field 'depth' must be an integer");
        s.depth = j.at("depth").get<int>();
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned())
            throw std::invalid_argument("corpus spec: field 'seed' must be a nonnegative integer");
        s.seed = j.at("seed").get<std::uint64_t>();
    }
    s.validate();
    return s;
}

}  // namespace haarlip
