#include "cli_support.hpp"

#include "ellfrob/errors.hpp"

#include <toml.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <regex>
#include <sstream>

namespace ellfrob::cli {

namespace {

template <class T>
void take(std::optional<T>& dst, const std::optional<T>& src) {
    if (src) dst = src;
}

} // namespace

Overrides read_toml(const std::string& path) {
    toml::table tbl;
    try {
        tbl = toml::parse_file(path);
    } catch (const toml::parse_error& e) {
        throw ParseError("config " + path + ": " + std::string(e.description()));
    }
    static const std::vector<std::string> known{"seed", "samples", "n_quad", "workers", "max_terms", "tail_tol",
                                                "quad_tol", "format", "out", "u_grid"};
    for (const auto& [k, _] : tbl)
        if (std::find(known.begin(), known.end(), std::string(k.str())) == known.end())
            throw ParseError("config " + path + ": unknown key '" + std::string(k.str()) + "'");
    Overrides o;
    if (auto v = tbl["seed"].value<std::int64_t>()) {
        if (*v < 0) throw ParseError("config: seed must be nonnegative");
        o.seed = static_cast<std::uint64_t>(*v);
    }
    auto int_key = [&](const char* k, std::optional<int>& dst) {
        if (auto v = tbl[k].value<std::int64_t>()) dst = static_cast<int>(*v);
        else if (tbl.contains(k)) throw ParseError(std::string("config: ") + k + " must be an integer");
    };
    int_key("samples", o.samples);
    int_key("n_quad", o.n_quad);
    int_key("workers", o.workers);
    int_key("max_terms", o.max_terms);
    auto real_key = [&](const char* k, std::optional<double>& dst) {
        if (auto v = tbl[k].value<double>()) dst = *v;
        else if (tbl.contains(k)) throw ParseError(std::string("config: ") + k + " must be a number");
    };
    real_key("tail_tol", o.tail_tol);
    real_key("quad_tol", o.quad_tol);
    if (auto v = tbl["format"].value<std::string>()) o.format = *v;
    if (auto v = tbl["out"].value<std::string>()) o.out = *v;
    if (const auto* arr = tbl["u_grid"].as_array()) {
        std::vector<double> g;
        for (const auto& e : *arr) {
            auto d = e.value<double>();
            if (!d) throw ParseError("config: u_grid entries must be numbers");
            g.push_back(*d);
        }
        o.u_grid = g;
    }
    return o;
}

RunSettings resolve(const Overrides& flags, const Overrides& file) {
    Overrides m = file;
    take(m.seed, flags.seed);
    take(m.samples, flags.samples);
    take(m.n_quad, flags.n_quad);
    take(m.workers, flags.workers);
    take(m.max_terms, flags.max_terms);
    take(m.tail_tol, flags.tail_tol);
    take(m.quad_tol, flags.quad_tol);
    take(m.format, flags.format);
    take(m.out, flags.out);
    take(m.u_grid, flags.u_grid);

    RunSettings s;
    if (m.seed) s.run.seed = *m.seed;
    if (m.samples) s.run.samples = *m.samples;
    if (m.n_quad) s.run.quad.n_quad = *m.n_quad;
    if (m.workers) s.run.workers = *m.workers;
    if (m.max_terms) s.run.series.max_terms = *m.max_terms;
    if (m.tail_tol) s.run.series.tail_tol = *m.tail_tol;
    if (m.quad_tol) s.run.quad.quad_tol = *m.quad_tol;
    if (m.format) s.format = parse_format(*m.format);
    if (m.out) s.out = *m.out;
    if (m.u_grid) s.run.u_grid = *m.u_grid;
    s.run.validate();
    return s;
}

cplx parse_complex(const std::string& text) {
    static const std::string num = R"([0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?|[0-9]+\.)";
    static const std::regex real_only("^\\s*([+-]?(?:" + num + "))\\s*$");
    static const std::regex imag_only("^\\s*([+-]?(?:" + num + ")?)i\\s*$");
    static const std::regex both("^\\s*([+-]?(?:" + num + "))\\s*([+-]\\s*(?:" + num + ")?)i\\s*$");
    auto coef = [](std::string s) {
        s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
        if (s.empty() || s == "+") return 1.0;
        if (s == "-") return -1.0;
        return std::stod(s);
    };
    std::smatch m;
    if (std::regex_match(text, m, real_only)) return {std::stod(m[1].str()), 0.0};
    if (std::regex_match(text, m, imag_only)) return {0.0, coef(m[1].str())};
    if (std::regex_match(text, m, both)) return {std::stod(m[1].str()), coef(m[2].str())};
    throw ParseError("cannot read '" + text + "' as a complex number (expected re+imi)");
}

std::vector<cplx> parse_complex_list(const std::string& text, std::size_t expected) {
    std::vector<cplx> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_complex(item));
    if (expected && out.size() != expected)
        throw ParseError("expected " + std::to_string(expected) + " comma-separated values in '" + text + "'");
    return out;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    for (const cplx z : parse_complex_list(text, 0)) {
        if (z.imag() != 0.0) throw ParseError("expected real values in '" + text + "'");
        out.push_back(z.real());
    }
    return out;
}

Format parse_format(const std::string& s) {
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    throw ParseError("format must be json or csv, got '" + s + "'");
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const Mat3& m) {
    json rows = json::array();
    for (int i = 0; i < 3; ++i) {
        json r = json::array();
        for (int j = 0; j < 3; ++j) r.push_back(to_json(m(i, j)));
        rows.push_back(r);
    }
    return rows;
}

json to_json(const Tensor3& t) {
    json out = json::array();
    for (const auto& m : t) out.push_back(to_json(m));
    return out;
}

json to_json(const IntMatrix& m) { return m.to_rows(); }

json to_json(const KClass& k) {
    return {{"P", k.in(Basis::P).coords}, {"R", k.in(Basis::R).coords}, {"S", k.in(Basis::S).coords}};
}

json to_json(const Check& c) {
    return {{"id", c.id},
            {"tag", c.tag},
            {"value", c.value},
            {"threshold", c.threshold},
            {"compare", c.compare == Compare::at_most ? "at_most" : "at_least"},
            {"gating", c.gating},
            {"passed", c.passed()},
            {"note", c.note}};
}

json to_json(const SuiteReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return {{"suite", r.suite}, {"passed", r.passed()}, {"checks", checks}};
}

json to_json(const RunConfig& c) {
    return {{"seed", c.seed},
            {"samples", c.samples},
            {"max_terms", c.series.max_terms},
            {"tail_tol", c.series.tail_tol},
            {"quad_tol", c.quad.quad_tol},
            {"n_quad", c.quad.n_quad},
            {"u_grid", c.u_grid}};
}

json to_json(const AsymptoticFit& f, const PeriodTargets& t) {
    auto relerr = [](cplx a, cplx b) { return std::abs(a - b) / std::abs(b); };
    json values = json::array();
    for (std::size_t i = 0; i < f.u_grid.size(); ++i)
        values.push_back({{"u", f.u_grid[i]},
                          {"value", to_json(f.values[i].value)},
                          {"quad_error", f.values[i].error_estimate},
                          {"panels", f.values[i].panels}});
    json j{{"combination", combo_name(f.combo)},
           {"exponents", f.exponents},
           {"leading", to_json(f.leading)},
           {"subleading", to_json(f.subleading)},
           {"leading_target", to_json(t.leading)},
           {"subleading_target", to_json(t.subleading)},
           {"subleading_stated", to_json(t.subleading_stated)},
           {"leading_rel_error", relerr(f.leading, t.leading)},
           {"subleading_rel_error", relerr(f.subleading, t.subleading)},
           {"subleading_stated_rel_error", relerr(f.subleading, t.subleading_stated)},
           {"fit_residual", f.relative_residual},
           {"condition", f.condition},
           {"exponent_estimate", f.exponent_estimate},
           {"values", values}};
    if (std::isfinite(f.leading_richardson.real())) {
        j["leading_richardson"] = to_json(f.leading_richardson);
        j["leading_richardson_rel_error"] = relerr(f.leading_richardson, t.leading);
        j["subleading_richardson"] = to_json(f.subleading_richardson);
    }
    return j;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace ellfrob::cli
