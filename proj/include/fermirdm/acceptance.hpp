#pragma once

#include <functional>
#include <string>
#include <vector>

namespace fermirdm::acceptance {

inline constexpr int kCriterionCount = 12;

struct Check {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool passed = false;
};

enum class Status { passed, failed, skipped };

struct CriterionResult {
    int id = 0;
    std::string title;
    Status status = Status::failed;
    std::vector<Check> checks;
    std::string note;  ///< error text or skip reason
    double seconds = 0.0;
};

struct Options {
    /// Skip the criteria that need t = 0.01 Nystrom solves.
    bool quick = false;
    /// Multiplies every tolerance; values below 1 tighten the suite.
    double tolerance_scale = 1.0;
};

std::string criterion_title(int id);

/// Runs one criterion (1-based). Exceptions are caught and reported as failures.
CriterionResult run_criterion(int id, const Options& options);

std::vector<CriterionResult> run_all(const Options& options,
                                     const std::function<void(const CriterionResult&)>& on_result = {});

/// "[PASS] 3  free fermions ..." followed by one indented line per check.
std::string format_result(const CriterionResult& result);

}  // namespace fermirdm::acceptance
