#pragma once

// Deterministic fan-out over independent tasks.  Each task writes its own
// slot; reduction happens sequentially afterwards (Neumaier-compensated), so
// results do not depend on worker count or scheduling.

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace sgf {

inline void parallel_for(long count, int workers, const std::function<void(long)>& task) {
    if (workers < 1) workers = 1;
    if (workers == 1 || count < 2) {
        for (long i = 0; i < count; ++i) task(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors;
    errors.resize(std::size_t(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (long i = w; i < count; i += workers) task(i);
            } catch (...) {
                errors[std::size_t(w)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// Compensated sequential sum; reproducible to the last bit for a fixed input
// order regardless of how the inputs were produced.
inline double compensated_sum(const std::vector<double>& xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
    double variance = 0.0;
};

inline MeanStderr mean_stderr(const std::vector<double>& xs) {
    MeanStderr m;
    const double n = double(xs.size());
    if (xs.empty()) return m;
    m.mean = compensated_sum(xs) / n;
    if (xs.size() < 2) return m;
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - m.mean) * (xs[i] - m.mean);
    m.variance = compensated_sum(sq) / (n - 1.0);
    m.stderr_ = std::sqrt(m.variance / n);
    return m;
}

}  // namespace sgf
