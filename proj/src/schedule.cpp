#include "locpot/schedule.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace locpot {

std::vector<std::vector<std::uint32_t>> component_graph(const Cdag& g, const Partition& p) {
    std::vector<std::vector<std::uint32_t>> adj(p.components.size());
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        std::uint32_t cu = p.assignment[v];
        for (VertexId s : g.successors(v)) {
            std::uint32_t cv = p.assignment[s];
            if (cu != cv) adj[cu].push_back(cv);
        }
    }
    for (auto& row : adj) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }

    // Kahn check: the quotient of a convex partition must be acyclic.
    std::vector<std::uint32_t> in_deg(adj.size(), 0);
    for (const auto& row : adj)
        for (std::uint32_t v : row) ++in_deg[v];
    std::vector<std::uint32_t> queue;
    for (std::uint32_t c = 0; c < adj.size(); ++c)
        if (in_deg[c] == 0) queue.push_back(c);
    std::size_t seen = 0;
    while (seen < queue.size()) {
        std::uint32_t c = queue[seen++];
        for (std::uint32_t v : adj[c])
            if (--in_deg[v] == 0) queue.push_back(v);
    }
    if (seen != adj.size())
        throw std::logic_error("component graph has a cycle: partition is not convex");
    return adj;
}

namespace {

void append_leaf(const Cdag& g, const ConvexComponent& cc, std::vector<std::uint64_t>& order) {
    std::size_t first = order.size();
    for (VertexId v : cc.members)
        if (g.is_op(v)) order.push_back(g.orig_index(v));
    std::sort(order.begin() + first, order.end());
}

void append_hierarchical(const Cdag& g, const MultiLevelResult& r, std::size_t level,
                         std::uint32_t comp, std::vector<std::uint64_t>& order) {
    const ConvexComponent& cc = r.levels[level].components[comp];
    if (level == 0) {
        append_leaf(g, cc, order);
        return;
    }
    for (std::uint32_t child : cc.members) append_hierarchical(g, r, level - 1, child, order);
}

}  // namespace

Schedule linearize(const Cdag& g, const Partition& p) {
    Schedule s;
    s.order.reserve(g.num_ops());
    for (const auto& cc : p.components) append_leaf(g, cc, s.order);
    return s;
}

Schedule linearize(const Cdag& g, const MultiLevelResult& r) {
    Schedule s;
    s.order.reserve(g.num_ops());
    const std::size_t top = r.levels.size() - 1;
    for (std::uint32_t c = 0; c < r.levels[top].components.size(); ++c)
        append_hierarchical(g, r, top, c, s.order);
    return s;
}

bool respects_dependences(const Cdag& g, const Schedule& s) {
    std::vector<std::uint64_t> position(g.num_vertices(), 0);
    if (s.order.size() != g.num_ops()) return false;
    for (std::uint64_t pos = 0; pos < s.order.size(); ++pos)
        position[g.op_vertex(s.order[pos])] = pos;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        if (!g.is_op(v)) continue;
        for (VertexId p : g.predecessors(v))
            if (g.is_op(p) && position[p] >= position[v]) return false;
    }
    return true;
}

void write_schedule(const Schedule& s, std::ostream& os) {
    for (std::uint64_t id : s.order) os << id << '\n';
}

}  // namespace locpot
