#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace poincare {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SelftestReport {
    std::vector<CheckResult> checks;
    std::vector<std::filesystem::path> artifacts;

    bool passed() const;
};

/// Runs the invariant suites and writes their CSV/JSON/PPM artifacts into out_dir.
/// Outputs depend only on the inputs, not on the worker count.
SelftestReport run_selftest(const std::filesystem::path& out_dir);

}  // namespace poincare
