#include "sieve/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

namespace sieve {

namespace {
std::atomic<int> g_threads{0};

int env_threads() {
    const char* s = std::getenv("EULER_SIEVE_THREADS");
    if (!s) return 0;
    int n = std::atoi(s);
    return n > 0 ? n : 0;
}
} // namespace

int thread_width() {
    int n = g_threads.load(std::memory_order_relaxed);
    if (n > 0) return n;
    n = env_threads();
    if (n > 0) return n;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void set_threads(int n) { g_threads.store(n > 0 ? n : 0, std::memory_order_relaxed); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    std::size_t width = static_cast<std::size_t>(thread_width());
    if (width <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (width > n) width = n;
    std::vector<std::thread> pool;
    pool.reserve(width);
    std::size_t chunk = (n + width - 1) / width;
    for (std::size_t w = 0; w < width; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

double pairwise_sum(std::vector<double>& v) {
    if (v.empty()) return 0.0;
    std::size_t n = v.size();
    while (n > 1) {
        std::size_t half = (n + 1) / 2;
        for (std::size_t i = 0; i + half < n; ++i) v[i] += v[i + half];
        n = half;
    }
    return v[0];
}

} // namespace sieve
