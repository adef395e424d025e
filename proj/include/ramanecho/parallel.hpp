#ifndef RAMANECHO_PARALLEL_HPP
#define RAMANECHO_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace ramanecho {

// Process-wide worker count used by parallel_for_blocks. 0 = hardware default.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs fn(block_begin, block_end) over [0, n) split into fixed-size blocks.
// The block boundaries depend only on `n` and `block` (never on the thread
// count), so callers that reduce per-block partials in block order get
// bit-identical results for any number of workers.
void parallel_for_blocks(std::size_t n, std::size_t block,
                         const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace ramanecho

#endif
