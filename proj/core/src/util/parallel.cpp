#include "noteffect/util/parallel.hpp"

#include <cstdlib>
#include <string>

namespace noteffect {

unsigned default_worker_count() {
  if (const char* env = std::getenv("NOTEFFECT_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace noteffect
