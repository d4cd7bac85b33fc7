// SPDX-License-Identifier: Apache-2.0
// Deterministic work-sharing loop.
//
// Workers pull indices from an atomic counter; each index writes only to its
// own result slot, and callers aggregate slots in index order afterwards.
// Results are therefore identical for any worker count, including 1.
#pragma once

#include <cstddef>
#include <functional>

namespace exitlab {

//! Invoke body(i) for i in [0, n); body must only touch per-index state.
void parallel_for(std::size_t n, int n_threads, const std::function<void(std::size_t)>& body);

}  // namespace exitlab
