#pragma once

#include <string>
#include <vector>

namespace abatement {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Run every acceptance criterion. Each entry records the measured values so
/// a failure is diagnosable from the line alone.
std::vector<CriterionResult> run_acceptance();

/// "PASS  3  oracle equivalence: ..." style line.
std::string format_result(const CriterionResult& result);

}  // namespace abatement
