#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace awdg {

/// Runs fn(begin, end) over contiguous chunks of [0, n). Each index is
/// touched by exactly one worker, so results do not depend on the worker
/// count as long as fn writes only to per-index outputs.
template <class Fn>
void parallel_for(int n, int workers, Fn&& fn) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    fn(0, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int b = w * chunk;
    const int e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
}

/// Like parallel_for, but fn always sees the same fixed-size blocks
/// [k*block, min(n, (k+1)*block)) whatever the worker count. Use this when
/// fn runs blocked linear algebra whose rounding depends on block shape.
template <class Fn>
void parallel_blocks(int n, int block, int workers, Fn&& fn) {
  const int n_blocks = (n + block - 1) / block;
  parallel_for(n_blocks, workers, [&](int b0, int b1) {
    for (int k = b0; k < b1; ++k) fn(k * block, std::min(n, (k + 1) * block));
  });
}

/// Runs fn(i) for i in [0, n) with workers pulling indices from a shared
/// counter. Suits a few tasks of very different cost.
template <class Fn>
void parallel_tasks(int n, int workers, Fn&& fn) {
  workers = std::max(1, std::min(workers, n));
  std::atomic<int> next{0};
  auto loop = [&] {
    for (int i = next++; i < n; i = next++) fn(i);
  };
  if (workers == 1) {
    loop();
    return;
  }
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(loop);
}

}  // namespace awdg
