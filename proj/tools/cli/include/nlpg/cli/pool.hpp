#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace nlpg::cli {

/// Outcome of one sweep point: a value, or the message of the exception it threw.
template <class T>
struct TaskResult {
    std::optional<T> value;
    std::string error;
    bool solver_failure = false;
};

/// Evaluates fn(0..n-1) on at most `jobs` threads. Results are stored by
/// index, so the output never depends on scheduling. Exceptions are caught
/// per task; `is_solver_failure` classifies them.
template <class T, class Fn, class Classify>
std::vector<TaskResult<T>> parallel_map(std::size_t n, unsigned jobs, Fn fn, Classify is_solver_failure) {
    std::vector<TaskResult<T>> out(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i].value = fn(i);
            } catch (const std::exception& ex) {
                out[i].error = ex.what();
                out[i].solver_failure = is_solver_failure(ex);
            }
        }
    };
    const unsigned count = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), std::max<std::size_t>(n, 1)));
    std::vector<std::thread> threads;
    for (unsigned t = 1; t < count; ++t) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();
    return out;
}

}  // namespace nlpg::cli
