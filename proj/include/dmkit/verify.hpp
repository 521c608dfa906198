#pragma once

#include <string>
#include <vector>

namespace dmkit {

struct CriterionResult {
    int id = 0;
    std::string name;
    std::string status;  // "pass" | "fail" | "inconclusive"
    std::string detail;

    bool ok(bool low_budget) const {
        return status == "pass" || (low_budget && status == "inconclusive");
    }
};

/// Runs the pinned verification suite. With low_budget the expensive
/// counting experiments run under a reduced work bound and may come back
/// "inconclusive" instead of failing. only filters by substring of the
/// criterion name (empty = all).
std::vector<CriterionResult> run_acceptance(bool low_budget = false,
                                            const std::string& only = "");

}  // namespace dmkit
