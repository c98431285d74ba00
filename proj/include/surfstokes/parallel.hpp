#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace surfstokes
{

/// Worker count from SURFACE_STOKES_THREADS (default 1).
inline int thread_count()
{
  char const * env = std::getenv("SURFACE_STOKES_THREADS");
  if (env == nullptr)
    return 1;
  try {
    return std::clamp(std::stoi(env), 1, 256);
  } catch (...) {
    return 1;
  }
}

/// Run fn(begin, end, worker) over contiguous chunks of [0, n).  Chunk
/// boundaries depend only on n and the worker count.
template <typename Fn>
void parallel_for(int n, int workers, Fn && fn)
{
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    fn(0, n, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    int const begin = static_cast<int>(static_cast<long long>(n) * w / workers);
    int const end = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
    pool.emplace_back([&fn, begin, end, w] { fn(begin, end, w); });
  }
  for (auto & t : pool)
    t.join();
}

} // namespace surfstokes
