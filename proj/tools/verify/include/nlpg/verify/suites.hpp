#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlpg/verify/checks.hpp"

namespace nlpg::verify {

/// Names accepted by run_suite, in display order.
const std::vector<std::string>& suite_names();

/// Runs every property of a named suite. Throws std::invalid_argument for
/// an unknown name.
std::vector<Check> run_suite(const std::string& name, std::uint64_t seed);

}  // namespace nlpg::verify
