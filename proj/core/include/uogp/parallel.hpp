#pragma once

#include <cstdint>
#include <functional>

namespace uogp {

/// Number of worker threads to use: min(hardware_concurrency,
/// UOGP_MAX_WORKERS) with a floor of 1. The environment variable lets batch
/// schedulers cap the footprint without touching call sites.
int worker_count();

/// Runs fn(chunk_index) for chunk_index in [0, n_chunks) across
/// worker_count() threads. Chunk assignment is by index, so results that are
/// reduced per chunk (and then combined in chunk order) do not depend on the
/// worker count. Exceptions from workers are rethrown on the calling thread.
void parallel_for_chunks(std::int64_t n_chunks,
                         const std::function<void(std::int64_t)>& fn);

}  // namespace uogp
