// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0
//
// Thin wrappers over TBB. Stages call parallel_for and never own threads;
// the caller bounds concurrency with a ThreadLimit scope.

#ifndef CLEARANCE_PARALLEL_HPP_
#define CLEARANCE_PARALLEL_HPP_

#include <cstddef>
#include <memory>
#include <thread>

#include <tbb/blocked_range.h>
#include <tbb/global_control.h>
#include <tbb/parallel_for.h>

namespace clearance {

/// Calls fn(i) for i in [0, n). fn must only write to slot i of its outputs.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn)
{
    if (n == 0)
        return;
    tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n, 64), [&](const tbb::blocked_range<std::size_t>& r) {
        for (std::size_t i = r.begin(); i != r.end(); ++i)
            fn(i);
    });
}

/// Caps TBB parallelism for its lifetime. 0 means one thread per logical CPU.
class ThreadLimit
{
  public:
    explicit ThreadLimit(unsigned threads)
        : control_(std::make_unique<tbb::global_control>(tbb::global_control::max_allowed_parallelism,
                                                         threads == 0 ? default_threads() : threads))
    {
    }

    static unsigned default_threads()
    {
        const unsigned n = std::thread::hardware_concurrency();
        return n == 0 ? 1 : n;
    }

  private:
    std::unique_ptr<tbb::global_control> control_;
};

} // namespace clearance

#endif // CLEARANCE_PARALLEL_HPP_
