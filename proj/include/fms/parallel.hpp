#pragma once

#include <algorithm>
#include <cstdlib>
#include <future>
#include <thread>
#include <utility>
#include <vector>

#include "fms/scalar.hpp"

namespace fms {

/// Worker cap: FMS_THREADS if set, else the hardware count.
inline int max_threads() {
  if (const char* env = std::getenv("FMS_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

/// Evaluates f(0..n-1) in parallel chunks and returns the results in index
/// order, so the output is independent of scheduling.
template <typename R, typename F>
std::vector<R> map_indexed(Index n, F&& f) {
  std::vector<R> out(static_cast<std::size_t>(n));
  if (n <= 0) return out;
  const int workers = std::min<Index>(max_threads(), n);
  if (workers <= 1) {
    for (Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(i);
    return out;
  }
  std::vector<std::future<void>> jobs;
  jobs.reserve(workers);
  const Index chunk = (n + workers - 1) / workers;
  for (int wkr = 0; wkr < workers; ++wkr) {
    const Index lo = wkr * chunk;
    const Index hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    jobs.push_back(std::async(std::launch::async, [&out, &f, lo, hi] {
      for (Index i = lo; i < hi; ++i) out[static_cast<std::size_t>(i)] = f(i);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

/// Deterministic parallel argmax over [0, n): chunks are scanned serially and
/// merged in chunk order; ties keep the smallest index.
template <typename S, typename F>
std::pair<S, Index> arg_max_indexed(Index n, F&& eval) {
  if (n <= 0) throw std::invalid_argument("arg_max_indexed: empty range");
  struct Best {
    S value;
    Index index;
  };
  const int workers = std::min<Index>(max_threads(), n);
  const Index chunk = (n + workers - 1) / workers;
  auto scan = [&eval](Index lo, Index hi) {
    Best b{eval(lo), lo};
    for (Index i = lo + 1; i < hi; ++i) {
      S v = eval(i);
      if (v > b.value) b = Best{std::move(v), i};
    }
    return b;
  };
  if (workers <= 1) {
    Best b = scan(0, n);
    return {b.value, b.index};
  }
  std::vector<std::future<Best>> jobs;
  for (int wkr = 0; wkr < workers; ++wkr) {
    const Index lo = wkr * chunk;
    const Index hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    jobs.push_back(std::async(std::launch::async, [scan, lo, hi] { return scan(lo, hi); }));
  }
  Best best = jobs.front().get();
  for (std::size_t j = 1; j < jobs.size(); ++j) {
    Best b = jobs[j].get();
    if (b.value > best.value) best = b;
  }
  return {best.value, best.index};
}

}  // namespace fms
