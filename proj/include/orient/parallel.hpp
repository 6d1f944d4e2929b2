#pragma once

#include <cstddef>
#include <functional>

namespace orient {

// 0 restores the default (ORIENT_THREADS env var, else hardware concurrency).
void set_thread_count(unsigned n);
unsigned thread_count();

// Splits [0, count) into fixed-size blocks and runs fn(block_index, begin, end)
// for each. Blocks are statically assigned to workers, so any state written
// per block (and reduced in block order afterwards) is independent of the
// worker count. Exceptions from workers are rethrown on the calling thread.
void parallel_blocks(std::size_t count, std::size_t block_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

}  // namespace orient
