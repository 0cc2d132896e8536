#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nlpg::verify {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;       ///< property holds and the run stayed within its time limit
    double seconds = 0.0;
    double limit = 0.0;      ///< wall-clock budget in seconds, 0 when none is imposed
    std::string detail;
};

constexpr int kCriterionCount = 10;

/// Runs acceptance criterion `id` (1-based). Throws std::out_of_range otherwise.
CriterionResult run_criterion(int id, std::uint64_t seed = 1);

std::vector<CriterionResult> run_all_criteria(std::uint64_t seed = 1);

/// "[PASS] 3 title (1.23 s): detail" style summary line.
std::string format_line(const CriterionResult& r);

}  // namespace nlpg::verify
