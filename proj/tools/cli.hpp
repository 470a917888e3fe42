#pragma once

// Command-line front end: subcommands transform, analyze, verify, certify,
// synth and distance. Exit status 0 on success, 1 when a verdict fails,
// 2 on parse or validation errors.

#include "haarlip/haarlip.hpp"

#include "CLI11.hpp"

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace haarlip::cli {

enum class Format { json, csv, bin };

struct CliConfig {
    std::string subcommand;

    // input sources, exactly one of: input file, corpus spec, corpus flags
    std::optional<std::string> input;
    std::optional<std::string> meta;
    std::optional<std::string> spec;
    std::optional<std::string> kind;

    std::optional<int> m0;
    std::optional<int> J;
    std::optional<int> level;
    std::optional<std::uint64_t> index;
    std::optional<int> depth;
    std::optional<double> amplitude;
    std::optional<double> corpus_alpha;
    std::optional<std::uint64_t> seed;
    bool approximate = false;

    std::optional<double> alpha;
    std::optional<std::string> x;
    std::optional<std::string> y;
    std::optional<std::string> output;
    std::optional<Format> format;
    std::optional<double> tolerance;
    bool parallel = false;
};

/// --help was given; carries the rendered usage text.
struct HelpRequested {
    std::string text;
};

/// Validation failure; maps to exit status 2.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline std::string_view to_string(Format f) {
    switch (f) {
        case Format::json: return "json";
        case Format::csv: return "csv";
        case Format::bin: return "bin";
    }
    return "?";
}

/// Parses argv into a config. Throws CLI::ParseError on malformed flags.
inline CliConfig parse(int argc, const char* const* argv) {
    CliConfig c;
    CLI::App app{"Haar-coefficient characterisation of dyadic Lipschitz regularity", "haarlip"};
    app.require_subcommand(1);

    std::string format;
    auto add_source = [&](CLI::App* sub) {
        sub->add_option("--input", c.input, "cell values: CSV (one per line) or .bin");
        sub->add_option("--meta", c.meta, "JSON sidecar {domain_exponent, resolution_level} for CSV input");
        sub->add_option("--spec", c.spec, "corpus spec: JSON file or inline JSON object");
        sub->add_option("--kind", c.kind, "corpus kind: indicator, ramp, dyadic_weierstrass, random_lip, random_free, sine");
        sub->add_option("--m0,--domain-exponent", c.m0, "domain is [0, 2^m0)");
        sub->add_option("--J,--resolution-level", c.J, "cells are level-J dyadic intervals");
        sub->add_option("--level", c.level, "indicator interval level");
        sub->add_option("--index", c.index, "indicator interval index");
        sub->add_option("--depth", c.depth, "dyadic_weierstrass depth");
        sub->add_option("--amplitude", c.amplitude, "random_lip amplitude");
        sub->add_option("--corpus-alpha", c.corpus_alpha, "generator exponent (defaults to --alpha)");
        sub->add_option("--seed", c.seed, "generator seed");
        sub->add_flag("--approximate", c.approximate, "allow non-step corpus kinds (sine)");
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--output", c.output, "output file (default: standard output)");
        sub->add_option("--format", format, "json, csv or bin (synth)")->check(CLI::IsMember({"json", "csv", "bin"}));
        sub->add_option("--tolerance", c.tolerance, "relative tolerance for verdicts (default 1e-12)");
        sub->add_flag("--parallel", c.parallel, "allow parallel scans");
    };

    const std::pair<const char*, const char*> subs[] = {
        {"transform", "Haar coefficient table"},
        {"analyze", "per-level maxima and fitted exponent"},
        {"verify", "coefficient bound vs seminorm; exit 0 iff both bounds hold"},
        {"certify", "telescoping certificate for one pair; exit 0 iff it holds"},
        {"synth", "write a corpus function as CSV or binary"},
    };
    for (const auto& [name, description] : subs) {
        CLI::App* sub = app.add_subcommand(name, description);
        add_source(sub);
        add_common(sub);
        sub->add_option("--alpha", c.alpha, "regularity exponent");
        if (std::string_view(name) == "certify") {
            sub->add_option("--x", c.x, "first point (n/2^p or exact decimal)");
            sub->add_option("--y", c.y, "second point");
        }
    }
    CLI::App* distance = app.add_subcommand("distance", "dyadic distance between two points");
    distance->add_option("x", c.x, "first point")->required();
    distance->add_option("y", c.y, "second point")->required();
    add_common(distance);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        const auto subs = app.get_subcommands();
        throw HelpRequested{subs.empty() ? app.help() : subs.front()->help()};
    }
    for (CLI::App* sub : app.get_subcommands()) c.subcommand = sub->get_name();
    if (format == "json") c.format = Format::json;
    if (format == "csv") c.format = Format::csv;
    if (format == "bin") c.format = Format::bin;
    return c;
}

inline CliConfig parse(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"haarlip"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return parse(static_cast<int>(argv.size()), argv.data());
}

namespace detail {

template <class T>
Json opt(const std::optional<T>& v) {
    if (!v) return nullptr;
    return Json(*v);
}

inline Json config_json(const CliConfig& c, const std::optional<CorpusSpec>& corpus) {
    Json j;
    j["subcommand"] = c.subcommand;
    j["input"] = opt(c.input);
    j["meta"] = opt(c.meta);
    j["corpus"] = corpus ? to_json(*corpus) : Json(nullptr);
    j["approximate"] = c.approximate;
    j["alpha"] = opt(c.alpha);
    j["x"] = opt(c.x);
    j["y"] = opt(c.y);
    j["format"] = c.format ? Json(std::string(to_string(*c.format))) : Json(nullptr);
    j["tolerance"] = opt(c.tolerance);
    j["parallel"] = c.parallel;
    j["seed"] = corpus ? opt(corpus->seed) : opt(c.seed);
    return j;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("input: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Json parse_json_text(const std::string& text, const std::string& field) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw UsageError("field '" + field + "': invalid JSON: " + e.what());
    }
}

struct Loaded {
    StepFunction f;
    std::optional<CorpusSpec> corpus;
};

inline CorpusSpec corpus_from_flags(const CliConfig& c) {
    CorpusSpec s;
    try {
        s.kind = parse_corpus_kind(*c.kind);
    } catch (const std::invalid_argument&) {
        throw UsageError("field 'kind': unknown corpus kind '" + *c.kind + "'");
    }
    if (!c.m0) throw UsageError("field 'm0': required with --kind");
    if (!c.J) throw UsageError("field 'J': required with --kind");
    s.domain_exponent = *c.m0;
    s.resolution_level = *c.J;
    if (c.level || c.index) {
        if (!c.level || !c.index) throw UsageError("field 'interval': --level and --index go together");
        s.interval = DyadicInterval{*c.level, *c.index};
    }
    s.alpha = c.corpus_alpha ? c.corpus_alpha : c.alpha;
    if (s.kind != CorpusKind::dyadic_weierstrass && s.kind != CorpusKind::random_lip) s.alpha.reset();
    s.depth = c.depth;
    s.amplitude = c.amplitude;
    s.seed = c.seed;
    return s;
}

inline StepFunction load_values_file(const CliConfig& c) {
    const std::string& path = *c.input;
    if (path.ends_with(".bin")) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw UsageError("input: cannot open '" + path + "'");
        return read_binary(in);
    }
    std::ifstream in(path);
    if (!in) throw UsageError("input: cannot open '" + path + "'");
    std::vector<double> values = read_values_csv(in);
    if (values.empty()) throw UsageError("input: '" + path + "' holds no values");

    std::optional<int> m0 = c.m0, J = c.J;
    std::optional<std::string> meta = c.meta;
    if (!meta && std::filesystem::exists(path + ".json")) meta = path + ".json";
    if (meta && (!m0 || !J)) {
        const GridShape g = grid_shape_from_json(parse_json_text(read_file(*meta), "meta"));
        if (!m0) m0 = g.domain_exponent;
        if (!J) J = g.resolution_level;
    }
    const std::size_t n = values.size();
    if ((n & (n - 1)) != 0) throw UsageError("input: value count " + std::to_string(n) + " is not a power of two");
    const int depth = std::countr_zero(n);
    if (!m0) m0 = J ? depth - *J : 0;
    if (!J) J = depth - *m0;
    if (*m0 + *J != depth)
        throw UsageError("field 'resolution_level': " + std::to_string(n) + " values do not match m0 = " +
                         std::to_string(*m0) + ", J = " + std::to_string(*J));
    return {*m0, *J, std::move(values)};
}

inline Loaded load(const CliConfig& c) {
    const int sources = int(c.input.has_value()) + int(c.spec.has_value()) + int(c.kind.has_value());
    if (sources != 1)
        throw UsageError("input: give exactly one of --input, --spec, --kind (got " + std::to_string(sources) + ")");
    if (c.input) return {load_values_file(c), std::nullopt};

    if (c.kind && *c.kind == "sine") {
        if (!c.approximate) throw UsageError("field 'kind': 'sine' is not a step function; pass --approximate");
        if (!c.m0 || !c.J) throw UsageError("field 'm0'/'J': required with --kind");
        const double period = std::ldexp(1.0, *c.m0);
        return {sampled([&](double x) { return std::sin(2 * std::numbers::pi * x / period); }, *c.m0, *c.J),
                std::nullopt};
    }

    CorpusSpec spec;
    if (c.spec) {
        const std::string text = c.spec->starts_with("{") ? *c.spec : read_file(*c.spec);
        spec = corpus_spec_from_json(parse_json_text(text, "spec"));
    } else {
        spec = corpus_from_flags(c);
    }
    spec.validate();
    return {generate(spec), spec};
}

inline double require_alpha(const CliConfig& c) {
    if (!c.alpha) throw UsageError("field 'alpha': required by '" + c.subcommand + "'");
    if (!(*c.alpha > 0) || !std::isfinite(*c.alpha)) throw UsageError("field 'alpha': must be positive");
    return *c.alpha;
}

inline DyadicPoint require_point(const std::optional<std::string>& s, const char* field) {
    if (!s) throw UsageError(std::string("field '") + field + "': required");
    try {
        return parse_point(*s);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("field '") + field + "': " + e.what());
    }
}

inline Tolerance tolerance(const CliConfig& c) {
    Tolerance t;
    if (c.tolerance) {
        if (!(*c.tolerance >= 0)) throw UsageError("field 'tolerance': must be nonnegative");
        t.relative = *c.tolerance;
    }
    return t;
}

}  // namespace detail

/// Runs one subcommand. Reports go to --output when set, otherwise to `out`;
/// diagnostics go to `err`.
inline int run(const CliConfig& c, std::ostream& out, std::ostream& err) {
    try {
        std::ostringstream body;
        int status = 0;
        Format fmt = c.format.value_or(c.subcommand == "synth" ? Format::csv : Format::json);
        if (fmt == Format::bin && c.subcommand != "synth") throw UsageError("field 'format': 'bin' is only valid for synth");
        auto emit_json = [&](const Json& j) { body << j.dump(2) << '\n'; };

        if (c.subcommand == "distance") {
            const DyadicPoint x = detail::require_point(c.x, "x");
            const DyadicPoint y = detail::require_point(c.y, "y");
            const DyadicScalar d = delta(x, y);
            if (fmt == Format::json) {
                Json j{{"config", detail::config_json(c, std::nullopt)},
                       {"x", x.to_string()},
                       {"y", y.to_string()},
                       {"delta", d.to_string()},
                       {"abs_difference", abs_diff(x, y).to_string()}};
                if (!c.format) {
                    body << d.to_string() << '\n';
                } else {
                    emit_json(j);
                }
            } else {
                body << "x,y,delta\n" << x.to_string() << ',' << y.to_string() << ',' << d.to_string() << '\n';
            }
        } else {
            const detail::Loaded loaded = detail::load(c);
            const StepFunction& f = loaded.f;
            const Json config = detail::config_json(c, loaded.corpus);

            if (c.subcommand == "transform") {
                const CoefficientTable t = transform(f);
                if (fmt == Format::csv) {
                    write_coefficients_csv(body, t);
                } else {
                    emit_json(Json{{"config", config}, {"table", to_json(t)}});
                }
            } else if (c.subcommand == "analyze") {
                const CoefficientTable t = transform(f);
                const auto rows = per_level_max(t);
                std::optional<AlphaEstimate> est;
                std::string why;
                try {
                    est = estimate_alpha(t);
                } catch (const std::domain_error& e) {
                    why = e.what();
                    status = 1;
                }
                if (fmt == Format::csv) {
                    write_level_max_csv(body, rows);
                } else {
                    Json j{{"config", config}, {"per_level_max", to_json(rows)}, {"alpha_estimate", optional_json(est)}};
                    if (!est) j["alpha_estimate_error"] = why;
                    emit_json(j);
                }
                if (!est) err << "analyze: " << why << '\n';
            } else if (c.subcommand == "verify") {
                const RegularityReport r = verify_theorem(f, detail::require_alpha(c), detail::tolerance(c));
                if (fmt == Format::csv) {
                    write_level_max_csv(body, r.per_level_max);
                } else {
                    emit_json(Json{{"config", config}, {"report", to_json(r)}});
                }
                status = r.holds() ? 0 : 1;
            } else if (c.subcommand == "certify") {
                const double alpha = detail::require_alpha(c);
                const DyadicPoint x = detail::require_point(c.x, "x");
                const DyadicPoint y = detail::require_point(c.y, "y");
                if (x == y) throw UsageError("field 'y': must differ from x");
                if (!f.inside(x)) throw UsageError("field 'x': outside the domain [0, 2^m0)");
                if (!f.inside(y)) throw UsageError("field 'y': outside the domain [0, 2^m0)");
                const double A = coefficient_bound(transform(f), alpha);
                const TelescopingCertificate cert = telescope_certificate(f, x, y, alpha, A, detail::tolerance(c));
                if (fmt == Format::csv) {
                    body << "term,value\n"
                         << "I," << format_double(cert.endpoint_x) << "\nII," << format_double(cert.sum_x) << "\nIII,"
                         << format_double(cert.central) << "\nIV," << format_double(cert.sum_y) << "\nV,"
                         << format_double(cert.endpoint_y) << "\ntotal," << format_double(cert.total) << "\nbound,"
                         << format_double(cert.bound) << '\n';
                } else {
                    emit_json(Json{{"config", config}, {"certificate", to_json(cert)}});
                }
                status = cert.holds() ? 0 : 1;
            } else if (c.subcommand == "synth") {
                if (fmt == Format::bin) {
                    write_binary(body, f);
                } else if (fmt == Format::csv) {
                    write_values_csv(body, f);
                } else {
                    emit_json(Json{{"config", config},
                                   {"domain_exponent", f.domain_exponent()},
                                   {"resolution_level", f.resolution_level()},
                                   {"values", std::vector<double>(f.values().begin(), f.values().end())}});
                }
                if (c.output && fmt == Format::csv) {
                    std::ofstream meta(*c.output + ".json");
                    meta << to_json(GridShape{f.domain_exponent(), f.resolution_level()}).dump(2) << '\n';
                }
            } else {
                throw UsageError("subcommand: unknown '" + c.subcommand + "'");
            }
        }

        if (c.output) {
            std::ofstream file(*c.output, std::ios::binary);
            if (!file) throw UsageError("field 'output': cannot write '" + *c.output + "'");
            file << body.str();
        } else {
            out << body.str();
        }
        return status;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::overflow_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

/// parse + run, mapping flag errors to exit status 2.
inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CliConfig c;
    try {
        c = parse(argc, argv);
    } catch (const HelpRequested& h) {
        out << h.text;
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return run(c, out, err);
}

}  // namespace haarlip::cli
