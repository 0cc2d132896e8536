#include "nlpg/continuation.hpp"

#include <cmath>

#include "nlpg/errors.hpp"

namespace nlpg {

std::vector<double> exponent_path(double p_target, double max_ratio) {
    if (!(p_target > 1.0) || !std::isfinite(p_target))
        throw InvalidInput("exponent_path: target exponent must be finite and > 1");
    if (!(max_ratio > 1.0)) throw InvalidInput("exponent_path: ratio must exceed 1");
    std::vector<double> path{2.0};
    if (p_target == 2.0) return path;

    // Work with t = log(p - 1), which runs from 0 to log(p_target - 1).
    auto append_segment = [&](double t0, double t1, double ratio) {
        const double step = std::log(ratio);
        const int n = std::max(1, static_cast<int>(std::ceil(std::abs(t1 - t0) / step - 1e-12)));
        for (int i = 1; i <= n; ++i) {
            const double t = t0 + (t1 - t0) * static_cast<double>(i) / n;
            path.push_back(1.0 + std::exp(t));
        }
    };

    const double t_end = std::log(p_target - 1.0);
    const double t_knee = std::log(0.1);
    if (p_target < 1.1) {
        append_segment(0.0, t_knee, max_ratio);
        append_segment(t_knee, t_end, std::sqrt(max_ratio));
    } else {
        append_segment(0.0, t_end, max_ratio);
    }
    path.back() = p_target;
    return path;
}

std::vector<double> geometric_schedule(double start, double end, double ratio) {
    if (!(start > 0.0) || !(end > 0.0) || end > start)
        throw InvalidInput("geometric_schedule: need start >= end > 0");
    if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidInput("geometric_schedule: ratio in (0,1)");
    std::vector<double> out;
    double d = start;
    while (d > end * (1.0 + 1e-12)) {
        out.push_back(d);
        d *= ratio;
    }
    out.push_back(end);
    return out;
}

}  // namespace nlpg
