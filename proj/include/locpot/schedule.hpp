#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "locpot/cdag.hpp"
#include "locpot/partition.hpp"

namespace locpot {

/// Execution order as a permutation of trace record ids.
struct Schedule {
    std::vector<std::uint64_t> order;

    bool operator==(const Schedule&) const = default;
};

/// Quotient graph over the components of a base-vertex partition: adjacency
/// lists indexed by component, self-loops excluded. Throws std::logic_error
/// if the quotient has a cycle (which would mean the partition is invalid).
std::vector<std::vector<std::uint32_t>> component_graph(const Cdag& g, const Partition& p);

/// Components in creation order; within a component, original relative
/// order. Input vertices emit nothing.
Schedule linearize(const Cdag& g, const Partition& p);

/// Hierarchical order: a level-k component emits its level-(k-1)
/// sub-components in addition order, down to leaf components whose op
/// vertices run in original relative order.
Schedule linearize(const Cdag& g, const MultiLevelResult& r);

/// True iff every arc's producer is scheduled before its consumer.
bool respects_dependences(const Cdag& g, const Schedule& s);

void write_schedule(const Schedule& s, std::ostream& os);

}  // namespace locpot
