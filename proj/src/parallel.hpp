#ifndef MOYALSPIN_PARALLEL_HPP
#define MOYALSPIN_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace moyalspin::detail {

// Worker count: hardware concurrency, capped by MOYALSPIN_THREADS when set.
unsigned worker_count();

// Calls body(i) for i in [0, n). Iterations must be independent; each
// writes only its own output slots, so results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace moyalspin::detail

#endif
