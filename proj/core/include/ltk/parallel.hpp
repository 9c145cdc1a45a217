#pragma once

#include <cstddef>
#include <functional>

namespace ltk {

/// Worker count: LTK_THREADS if set (clamped to >= 1), else the hardware
/// concurrency.
int max_threads();

/// Runs fn(chunk_index) for chunk_index in [0, n_chunks) on up to
/// max_threads() workers. Chunk indices are handed out dynamically, so the
/// caller must make each chunk's output independent of scheduling (write to
/// per-chunk slots, merge in index order afterwards).
void parallel_for_chunks(std::size_t n_chunks, const std::function<void(std::size_t)>& fn);

}  // namespace ltk
