#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lobkit {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    std::vector<std::string> notes;
    double seconds = 0.0;
};

struct SelfcheckOptions {
    bool full = false;  ///< false: the deterministic criteria at reduced scale
    std::uint64_t seed = 20240607;
    unsigned threads = 1;
};

/// Fast mode runs criteria 1, 2, 3, 7, 8, 10 and 12 (no Monte Carlo limits)
/// at reduced scale; full mode runs all twelve at their stated scale.
std::vector<CriterionResult> run_selfcheck(const SelfcheckOptions& options);

}  // namespace lobkit
