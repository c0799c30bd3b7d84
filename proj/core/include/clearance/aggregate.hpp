// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0
//
// Multi-frame concatenation: every `step`-th frame of a sequence, starting
// at the first, is moved into the world frame and appended in order.

#ifndef CLEARANCE_AGGREGATE_HPP_
#define CLEARANCE_AGGREGATE_HPP_

#include <cstddef>
#include <vector>

#include "clearance/ingest.hpp"

namespace clearance {

struct ConcatConfig
{
    std::size_t step{10};

    void validate() const;
};

/// Positions {0, step, 2*step, ...} below frame_count.
std::vector<std::size_t> select_frame_indices(std::size_t frame_count, std::size_t step);

/// World-frame cloud of the selected frames, frame k's points before frame k+1's.
LabeledPointCloud concatenate(const Sequence& sequence, const ConcatConfig& config);

} // namespace clearance

#endif // CLEARANCE_AGGREGATE_HPP_
