#pragma once

#include <cstdlib>
#include <string>

#include <omp.h>

namespace streamviz {

/// Environment variable consulted when a worker count of 0 ("auto") is given.
inline constexpr const char* kWorkersEnv = "STREAMVIZ_WORKERS";

/// Maps a requested worker count to the number of threads to use: positive
/// values pass through, 0 means $STREAMVIZ_WORKERS or all hardware threads.
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv(kWorkersEnv)) {
    try {
      int from_env = std::stoi(env);
      if (from_env > 0) return from_env;
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return omp_get_max_threads();
}

}  // namespace streamviz
