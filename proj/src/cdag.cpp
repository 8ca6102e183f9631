#include "locpot/cdag.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_map>

namespace locpot {

Cdag build_cdag(const Trace& t) {
    Cdag g;
    std::unordered_map<Addr, VertexId> last_writer;
    last_writer.reserve(t.records.size());

    auto new_vertex = [&g](std::uint8_t kind, Addr addr, std::uint64_t orig) {
        g.kind_.push_back(kind);
        g.addr_.push_back(addr);
        g.orig_index_.push_back(orig);
        return static_cast<VertexId>(g.kind_.size() - 1);
    };

    // Predecessor lists in record order; input vertices appear the first
    // time an address is read before any write to it.
    g.pred_off_.push_back(0);
    std::vector<VertexId> record_preds;
    g.op_vertex_.reserve(t.records.size());
    for (const auto& rec : t.records) {
        record_preds.clear();
        for (Addr a : rec.reads) {
            auto it = last_writer.find(a);
            VertexId producer;
            if (it == last_writer.end()) {
                producer = new_vertex(0, a, 0);
                g.pred_off_.push_back(g.pred_.size());
                ++g.num_inputs_;
                last_writer.emplace(a, producer);
            } else {
                producer = it->second;
            }
            if (std::find(record_preds.begin(), record_preds.end(), producer) == record_preds.end())
                record_preds.push_back(producer);
        }
        VertexId v = new_vertex(1, rec.write, rec.id);
        g.op_vertex_.push_back(v);
        for (VertexId p : record_preds) g.pred_.push_back(p);
        g.pred_off_.push_back(g.pred_.size());
        last_writer[rec.write] = v;
    }
    g.footprint_ = last_writer.size();

    // Successor CSR from the predecessor lists.
    std::vector<std::uint32_t> out_count(g.num_vertices(), 0);
    for (VertexId v = 0; v < g.num_vertices(); ++v)
        for (VertexId p : g.predecessors(v)) ++out_count[p];
    g.succ_off_.assign(g.num_vertices() + 1, 0);
    for (VertexId v = 0; v < g.num_vertices(); ++v)
        g.succ_off_[v + 1] = g.succ_off_[v] + out_count[v];
    g.succ_.resize(g.pred_.size());
    std::vector<std::size_t> cursor(g.succ_off_.begin(), g.succ_off_.end() - 1);
    for (VertexId v = 0; v < g.num_vertices(); ++v)
        for (VertexId p : g.predecessors(v)) g.succ_[cursor[p]++] = v;

    g.outputs_.reserve(last_writer.size());
    for (const auto& [addr, v] : last_writer) g.outputs_.push_back(v);
    std::sort(g.outputs_.begin(), g.outputs_.end());
    return g;
}

std::vector<VertexId> neighbors(const Cdag& g, VertexId v) {
    if (v >= g.num_vertices()) throw std::out_of_range("unknown vertex id");
    std::vector<VertexId> result;
    for (VertexId s : g.successors(v))
        for (VertexId u : g.predecessors(s)) {
            if (u == v) continue;
            if (std::find(result.begin(), result.end(), u) == result.end()) result.push_back(u);
        }
    return result;
}

void write_edge_list(const Cdag& g, std::ostream& os) {
    for (VertexId v = 0; v < g.num_vertices(); ++v)
        for (VertexId s : g.successors(v)) os << v << ' ' << s << '\n';
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        os << "# vertex " << v << (g.is_input(v) ? " input" : " op") << " addr=" << g.address_of(v);
        if (g.is_op(v)) os << " record=" << g.orig_index(v);
        os << '\n';
    }
}

}  // namespace locpot
