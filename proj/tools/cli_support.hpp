#pragma once

#include "ellfrob/verification.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace ellfrob::cli {

using nlohmann::json;

enum class Format { json, csv };

struct RunSettings {
    RunConfig run;
    Format format = Format::json;
    std::string out; // empty: stdout
};

// command-line values override TOML values, which override defaults; unset fields stay empty
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> samples, n_quad, workers, max_terms;
    std::optional<double> tail_tol, quad_tol;
    std::optional<std::string> format, out;
    std::optional<std::vector<double>> u_grid;
};
Overrides read_toml(const std::string& path);
RunSettings resolve(const Overrides& flags, const Overrides& file);

// "1.5", "-2i", "0+1i", "0.1-1.3e-2i"; ParseError otherwise
cplx parse_complex(const std::string& text);
// comma-separated list of complex numbers
std::vector<cplx> parse_complex_list(const std::string& text, std::size_t expected);
std::vector<double> parse_real_list(const std::string& text);
Format parse_format(const std::string& s);

json to_json(cplx z);
json to_json(const Mat3& m);
json to_json(const Tensor3& t);
json to_json(const IntMatrix& m);
json to_json(const KClass& k);
json to_json(const Check& c);
json to_json(const SuiteReport& r);
json to_json(const RunConfig& c);
json to_json(const AsymptoticFit& f, const PeriodTargets& t);

std::string csv_escape(const std::string& s);
std::string format_double(double v);

} // namespace ellfrob::cli
