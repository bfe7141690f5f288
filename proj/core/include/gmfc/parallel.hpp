#pragma once

#include <cstddef>
#include <functional>

namespace gmfc {

/// Worker count used by the label-parallel loops. Defaults to the GMFC_THREADS
/// environment variable, else 1. Values < 1 are clamped to 1.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Run body(begin, end) over [0, n) split into contiguous, schedule-independent
/// chunks. Each index is visited exactly once; callers write to disjoint slots
/// and reduce afterwards in index order, so results do not depend on the
/// worker count. Exceptions from workers are rethrown (first chunk wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace gmfc
