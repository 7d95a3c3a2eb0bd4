#pragma once

#include "ellfrob/gamma_periods.hpp"
#include "ellfrob/parallel.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ellfrob {

struct RunConfig {
    std::uint64_t seed = 7;
    int samples = 100;       // identities and invariants; frobenius uses half, LL round trips a fifth
    int workers = default_workers();
    SeriesConfig series;
    QuadConfig quad;
    std::vector<double> u_grid{25, 50, 100, 200};

    void validate() const;
};

enum class Compare { at_most, at_least };

struct Check {
    std::string id;    // "<group>/<name>"
    std::string tag;   // what the check exercises
    double value = 0;  // worst case over samples
    double threshold = 0;
    Compare compare = Compare::at_most;
    bool gating = true; // informational checks never fail a suite
    std::string note;   // first error message, worst sample, ...

    bool passed() const;
    std::string group() const { return id.substr(0, id.find('/')); }
};

struct SuiteReport {
    std::string suite;
    std::vector<Check> checks;
    bool passed() const;
};

const std::vector<std::string>& suite_names(); // identities, frobenius, lattice, invariants, gamma
SuiteReport run_suite(const std::string& name, const RunConfig& cfg);

} // namespace ellfrob
