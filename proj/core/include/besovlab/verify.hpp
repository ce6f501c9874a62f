#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace besovlab {

struct CheckResult {
    /// Acceptance criterion number 1..10, or 0 for auxiliary invariants.
    int criterion = 0;
    std::string name;
    bool passed = false;
    /// Measured quantities, one "key=value" list.
    std::string detail;
    double seconds = 0.0;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    double seconds = 0.0;

    bool passed() const;
    std::size_t failures() const;
};

/// Sizes used by the suites. The defaults are the acceptance sizes.
struct VerifyOptions {
    /// Grid level of the L-shape heat snapshot.
    int heat_level = 9;
    /// Finest level of the Kondratiev refinement study (coarsest is 7).
    int kondratiev_level_hi = 10;
    /// Finest level of the manufactured-solution ladder (4 grids).
    int manufactured_level_hi = 8;
    /// Called once per finished check, in order.
    std::function<void(const CheckResult&)> on_result;
};

/// "pencil", "norms", "rates", "picard", "all".
const std::vector<std::string>& suite_names();

/// Runs every check of a suite. A throwing check is recorded as failed with
/// the error text; the suite always runs to the end.
/// Throws Error("invalid-argument") for an unknown suite name.
SuiteReport verify_suite(std::string_view suite, const VerifyOptions& opt = {});

/// CSV with header suite,criterion,name,passed,detail. Timings are left out
/// so reruns compare byte for byte.
std::string suite_csv(const SuiteReport& report);

}  // namespace besovlab
