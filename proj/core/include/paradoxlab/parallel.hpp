#pragma once

#include <cstddef>
#include <functional>

namespace paradoxlab {

// Effective worker count: PARADOXLAB_WORKERS overrides `requested`;
// 0 means hardware concurrency.
std::size_t resolve_workers(std::size_t requested);

// Runs fn(begin, end) over disjoint chunks of [0, count). Work is handed out
// dynamically, so results must be written to index-addressed slots; with that
// discipline the output is identical for any worker count.
void parallel_chunks(std::size_t count, std::size_t workers,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace paradoxlab
