#pragma once

#include <vector>

namespace nlpg {

/// Exponent continuation path from 2 to `p_target` (both included).
///
/// Geometric in (p - 1): successive values of p - 1 differ by at most the
/// factor `max_ratio`. Below p = 1.1 the factor is tightened to sqrt(max_ratio),
/// because the nonlinearity stiffens quickly there. For p_target = 2 the path
/// is {2}.
std::vector<double> exponent_path(double p_target, double max_ratio = 1.3);

/// Geometric smoothing schedule from `start` down to `end` with factor `ratio`
/// (0 < ratio < 1); both endpoints are included.
std::vector<double> geometric_schedule(double start, double end, double ratio);

}  // namespace nlpg
