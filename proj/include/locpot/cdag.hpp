#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "locpot/trace.hpp"

namespace locpot {

using VertexId = std::uint32_t;

/// Dependence graph extracted from a trace: one vertex per program input
/// value (an address read before it is ever written) and one per executed
/// operation, with an arc for each producer -> consumer value flow.
///
/// Vertex ids are dense and assigned in creation order while scanning the
/// trace, so they form a topological order of the graph.
class Cdag {
public:
    std::uint32_t num_vertices() const { return static_cast<std::uint32_t>(kind_.size()); }
    std::uint32_t num_inputs() const { return num_inputs_; }
    std::uint32_t num_ops() const { return num_vertices() - num_inputs_; }

    bool is_input(VertexId v) const { return kind_[v] == 0; }
    bool is_op(VertexId v) const { return kind_[v] == 1; }

    std::span<const VertexId> successors(VertexId v) const {
        return {succ_.data() + succ_off_[v], succ_off_[v + 1] - succ_off_[v]};
    }
    std::span<const VertexId> predecessors(VertexId v) const {
        return {pred_.data() + pred_off_[v], pred_off_[v + 1] - pred_off_[v]};
    }
    std::uint32_t out_degree(VertexId v) const {
        return static_cast<std::uint32_t>(succ_off_[v + 1] - succ_off_[v]);
    }
    std::uint32_t in_degree(VertexId v) const {
        return static_cast<std::uint32_t>(pred_off_[v + 1] - pred_off_[v]);
    }

    /// Written address for ops, the input's own address for inputs.
    Addr address_of(VertexId v) const { return addr_[v]; }
    /// Original trace record id; only meaningful for op vertices.
    std::uint64_t orig_index(VertexId v) const { return orig_index_[v]; }
    /// Op vertex for a record id.
    VertexId op_vertex(std::uint64_t record_id) const { return op_vertex_[record_id]; }

    /// Final writer of each address, sorted by vertex id.
    std::span<const VertexId> outputs() const { return outputs_; }

    /// Number of distinct addresses touched by the trace.
    std::uint64_t footprint() const { return footprint_; }

    std::uint64_t num_arcs() const { return succ_.size(); }

private:
    std::vector<std::uint8_t> kind_;  // 0 input, 1 op
    std::vector<Addr> addr_;
    std::vector<std::uint64_t> orig_index_;
    std::vector<VertexId> op_vertex_;
    std::vector<std::size_t> succ_off_, pred_off_;
    std::vector<VertexId> succ_, pred_;
    std::vector<VertexId> outputs_;
    std::uint32_t num_inputs_ = 0;
    std::uint64_t footprint_ = 0;

    friend Cdag build_cdag(const Trace& t);
};

Cdag build_cdag(const Trace& t);

/// All vertices other than v sharing at least one successor with v.
std::vector<VertexId> neighbors(const Cdag& g, VertexId v);  // throws std::out_of_range

/// Debug export: "u v" arc lines followed by vertex annotations.
void write_edge_list(const Cdag& g, std::ostream& os);

}  // namespace locpot
