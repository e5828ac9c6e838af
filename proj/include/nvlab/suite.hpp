#pragma once

#include <string>
#include <vector>

#include "nvlab/common.hpp"

namespace nv {

/// The acceptance battery: every numbered check with its pinned tolerance,
/// runnable one by one or as a whole. A criterion line carries the measured
/// values so reports are machine-parsable.

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details;  // measured values vs tolerances
    double seconds = 0.0;
};

struct SuiteReport {
    std::vector<CriterionResult> results;
    bool all_pass = false;
};

/// Runs criteria with the given ids (empty = all 12). Each criterion prints
/// one PASS/FAIL line to stdout as it completes when `verbose`.
SuiteReport run_acceptance(const std::vector<int>& only = {}, bool verbose = true);

std::string suite_report_json(const SuiteReport& r);

}  // namespace nv
