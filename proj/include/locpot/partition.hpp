#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "locpot/cdag.hpp"

namespace locpot {

/// Ratio of ready-neighbor picks to ready-successor picks while growing a
/// component: >1 prefers breadth, <1 prefers depth. Stored as an exact
/// rational; den == 0 encodes an unbounded neighbor preference.
struct Priority {
    std::uint64_t num = 1;
    std::uint64_t den = 1;

    static Priority breadth() { return {2, 1}; }
    static Priority depth() { return {1, 2}; }
    static Priority equal() { return {1, 1}; }
    static Priority infinite_breadth() { return {1, 0}; }

    /// Accepts "breadth", "depth", "equal", "p/q", an integer, or a decimal.
    static Priority parse(std::string_view s);  // throws std::invalid_argument
    std::string to_string() const;

    bool operator==(const Priority&) const = default;
};

struct HeuristicParams {
    std::uint64_t capacity = 256;  // maxlive C, counted in live values (words)
    Priority priority = Priority::equal();
    bool multilevel = false;
    std::uint64_t factor = 2;  // capacity multiplier per level
    bool count_inputs_in_liveset = true;
};

struct ConvexComponent {
    std::vector<VertexId> members;  // addition order
    std::uint64_t peak_liveset = 0;
    bool forced_first = false;  // first vertex alone exceeded the capacity
    std::uint32_t creation_index = 0;
};

/// Disjoint cover of a graph's vertices by convex components, in creation
/// order. For multi-level results the vertices of level l > 0 are the
/// component indices of level l-1.
struct Partition {
    std::vector<ConvexComponent> components;
    std::vector<std::uint32_t> assignment;  // vertex -> component index
    std::uint64_t capacity = 0;
};

struct MultiLevelResult {
    std::vector<Partition> levels;  // levels[0] is over CDAG vertices

    const Partition& final_level() const { return levels.back(); }
};

/// Single-level maxlive-bounded component growing.
Partition generate_convex_components(const Cdag& g, const HeuristicParams& params);

/// Repartitions macro nodes with the capacity multiplied by params.factor per
/// level until it reaches the CDAG footprint.
MultiLevelResult multi_level_partitioning(const Cdag& g, const HeuristicParams& params);

/// Base-vertex view of the partition at the given level: each component
/// carries the CDAG vertices it covers, in hierarchical addition order.
Partition flatten_level(const MultiLevelResult& r, std::size_t level);

/// Test oracle: true iff no path leaves a component and re-enters it.
/// Checked by DAG reachability per component; intended for small graphs.
bool verify_convexity(const Cdag& g, const Partition& p);

/// Debug dump: "component <k>: <vertex ids...>" plus a stats line each.
void write_partition(const Partition& p, std::ostream& os);

}  // namespace locpot
