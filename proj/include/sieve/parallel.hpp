#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace sieve {

// Worker count used by parallel_for. Resolution order: explicit set_threads()
// (the CLI calls this), else the EULER_SIEVE_THREADS environment variable,
// else hardware concurrency.
int thread_width();
void set_threads(int n);

// Runs fn(i) for i in [0, n). Work is split into contiguous chunks; each
// index is processed by exactly one worker, so writes to per-index slots are
// race-free and results do not depend on the schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Deterministic pairwise reduction; summation order depends only on size.
double pairwise_sum(std::vector<double>& v);

} // namespace sieve
