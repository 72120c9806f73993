#pragma once

#include <cstdint>

namespace tsnsim {

using NodeId = std::int32_t;
using DomainId = std::int32_t;

/// Identifies a clock in announce comparisons. Unique per node.
using ClockIdentity = std::uint64_t;

} // namespace tsnsim
