#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace simplexstab {

// Number of worker threads used by sample-parallel loops. Defaults to the
// SIMPLEXSTAB_WORKERS environment variable, else hardware concurrency.
int worker_count();
void set_worker_count(int workers);

inline constexpr std::uint64_t kSampleBlock = 4096;

// Runs fn(block_index, begin, end) for consecutive blocks of [0, total) and
// returns the per-block results in block order. Results never depend on the
// worker count.
template <class Result, class Fn>
std::vector<Result> map_blocks(std::uint64_t total, Fn&& fn,
                               std::uint64_t block = kSampleBlock) {
  const std::uint64_t blocks = (total + block - 1) / block;
  std::vector<Result> out(blocks);
  const int workers =
      static_cast<int>(std::min<std::uint64_t>(worker_count(), std::max<std::uint64_t>(blocks, 1)));
  auto run = [&](std::uint64_t b) {
    const std::uint64_t begin = b * block;
    const std::uint64_t end = std::min(total, begin + block);
    out[b] = fn(b, begin, end);
  };
  if (workers <= 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) run(b);
    return out;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::uint64_t b = w; b < blocks; b += workers) run(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

// Running mean/variance with a deterministic pairwise merge.
struct MeanAccumulator {
  double count = 0;
  double mean = 0;
  double m2 = 0;

  void add(double x) {
    count += 1;
    const double d = x - mean;
    mean += d / count;
    m2 += d * (x - mean);
  }

  void merge(const MeanAccumulator& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double total = count + o.count;
    const double d = o.mean - mean;
    mean += d * o.count / total;
    m2 += o.m2 + d * d * count * o.count / total;
    count = total;
  }

  double variance() const { return count > 1 ? m2 / (count - 1) : 0.0; }
  double stderr_of_mean() const {
    return count > 0 ? std::sqrt(variance() / count) : 0.0;
  }
};

template <class Fn>
MeanAccumulator parallel_mean(std::uint64_t total, Fn&& sample_value) {
  auto parts = map_blocks<MeanAccumulator>(
      total, [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
        MeanAccumulator acc;
        for (std::uint64_t i = begin; i < end; ++i) acc.add(sample_value(i));
        return acc;
      });
  MeanAccumulator all;
  for (const auto& p : parts) all.merge(p);
  return all;
}

}  // namespace simplexstab
