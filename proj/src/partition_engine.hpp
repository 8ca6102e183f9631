// Internals of the convex-partitioning heuristic, shared between
// partition.cpp and the unit tests.
#pragma once

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "locpot/cdag.hpp"
#include "locpot/partition.hpp"

namespace locpot::detail {

constexpr std::uint32_t kUnassigned = std::numeric_limits<std::uint32_t>::max();
constexpr std::uint64_t kNoCapacity = std::numeric_limits<std::uint64_t>::max();

// Graph being partitioned at one level. Level 0 mirrors the CDAG; higher
// levels are macro-node quotients. base lists hold the CDAG vertices a node
// stands for, in the order they were added at lower levels.
struct LevelGraph {
    std::uint32_t n = 0;
    std::vector<std::size_t> succ_off, pred_off;
    std::vector<std::uint32_t> succ, pred;
    std::vector<std::size_t> base_off;
    std::vector<VertexId> base;

    std::span<const std::uint32_t> succs(std::uint32_t u) const {
        return {succ.data() + succ_off[u], succ_off[u + 1] - succ_off[u]};
    }
    std::span<const std::uint32_t> preds(std::uint32_t u) const {
        return {pred.data() + pred_off[u], pred_off[u + 1] - pred_off[u]};
    }
    std::span<const VertexId> base_nodes(std::uint32_t u) const {
        return {base.data() + base_off[u], base_off[u + 1] - base_off[u]};
    }
};

inline LevelGraph base_level(const Cdag& g) {
    LevelGraph lg;
    lg.n = g.num_vertices();
    lg.succ_off.resize(lg.n + 1);
    lg.pred_off.resize(lg.n + 1);
    lg.succ.reserve(g.num_arcs());
    lg.pred.reserve(g.num_arcs());
    for (VertexId v = 0; v < lg.n; ++v) {
        lg.succ_off[v] = lg.succ.size();
        for (VertexId s : g.successors(v)) lg.succ.push_back(s);
        lg.pred_off[v] = lg.pred.size();
        for (VertexId p : g.predecessors(v)) lg.pred.push_back(p);
    }
    lg.succ_off[lg.n] = lg.succ.size();
    lg.pred_off[lg.n] = lg.pred.size();
    lg.base_off.resize(lg.n + 1);
    std::iota(lg.base_off.begin(), lg.base_off.end(), std::size_t{0});
    lg.base.resize(lg.n);
    std::iota(lg.base.begin(), lg.base.end(), VertexId{0});
    return lg;
}

// Quotient of prev by the partition computed on it. Macro arcs are deduped;
// base lists concatenate the members' base lists in addition order.
inline LevelGraph macro_level(const LevelGraph& prev, const Partition& part) {
    LevelGraph lg;
    lg.n = static_cast<std::uint32_t>(part.components.size());

    lg.base_off.assign(lg.n + 1, 0);
    lg.base.reserve(prev.base.size());
    for (std::uint32_t c = 0; c < lg.n; ++c) {
        for (std::uint32_t member : part.components[c].members) {
            auto nodes = prev.base_nodes(member);
            lg.base.insert(lg.base.end(), nodes.begin(), nodes.end());
        }
        lg.base_off[c + 1] = lg.base.size();
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs;
    for (std::uint32_t u = 0; u < prev.n; ++u) {
        std::uint32_t cu = part.assignment[u];
        for (std::uint32_t v : prev.succs(u)) {
            std::uint32_t cv = part.assignment[v];
            if (cu != cv) arcs.emplace_back(cu, cv);
        }
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

    lg.succ_off.assign(lg.n + 1, 0);
    lg.pred_off.assign(lg.n + 1, 0);
    for (auto [u, v] : arcs) {
        ++lg.succ_off[u + 1];
        ++lg.pred_off[v + 1];
    }
    for (std::uint32_t c = 0; c < lg.n; ++c) {
        lg.succ_off[c + 1] += lg.succ_off[c];
        lg.pred_off[c + 1] += lg.pred_off[c];
    }
    lg.succ.resize(arcs.size());
    lg.pred.resize(arcs.size());
    std::vector<std::size_t> scur(lg.succ_off.begin(), lg.succ_off.end() - 1);
    std::vector<std::size_t> pcur(lg.pred_off.begin(), lg.pred_off.end() - 1);
    for (auto [u, v] : arcs) {
        lg.succ[scur[u]++] = v;
        lg.pred[pcur[v]++] = u;
    }
    return lg;
}

// Birth/resurrection/death bookkeeping over the CDAG vertices. The liveset
// belongs to the component being grown (an epoch stamp empties it in O(1));
// the unprocessed-successor countdown persists for a whole level run.
// Failed updates roll back through a journal.
class Liveness {
public:
    Liveness(const Cdag& g, bool count_inputs)
        : g_(g),
          count_inputs_(count_inputs),
          rem_succ_(g.num_vertices(), 0),
          live_(g.num_vertices(), 0) {}

    void reset_level() {
        for (VertexId v = 0; v < g_.num_vertices(); ++v) rem_succ_[v] = g_.out_degree(v);
        std::fill(live_.begin(), live_.end(), 0);
        epoch_ = 0;
        new_component();
    }

    void new_component() {
        ++epoch_;
        live_count_ = 0;
        journal_.clear();
    }

    std::size_t mark() const { return journal_.size(); }

    // Fires v. While v executes, the values it reads are resident
    // (resurrection) and its own result is born, so the capacity bounds that
    // transient set; predecessors whose last consumer is v die once the
    // check passes. A failed check undoes everything and returns false.
    bool fire(VertexId v, std::uint64_t capacity) {
        std::size_t m = journal_.size();
        for (VertexId p : g_.predecessors(v)) set_live(p);
        if (rem_succ_[v] > 0) set_live(v);
        last_transient_ = live_count_;
        if (live_count_ > capacity) {
            rollback(m);
            return false;
        }
        for (VertexId p : g_.predecessors(v)) {
            --rem_succ_[p];
            journal_.push_back({Op::dec, p});
        }
        for (VertexId p : g_.predecessors(v))
            if (rem_succ_[p] == 0) clear_live(p);
        return true;
    }

    void rollback(std::size_t m) {
        while (journal_.size() > m) {
            auto [op, v] = journal_.back();
            journal_.pop_back();
            switch (op) {
                case Op::dec: ++rem_succ_[v]; break;
                case Op::set: live_[v] = 0; --live_count_; break;
                case Op::clear: live_[v] = epoch_; ++live_count_; break;
            }
        }
    }

    std::uint64_t live_count() const { return live_count_; }
    // Transient liveset size observed during the most recent successful fire.
    std::uint64_t last_fire_transient() const { return last_transient_; }
    bool is_live(VertexId v) const { return live_[v] == epoch_; }

private:
    enum class Op : std::uint8_t { dec, set, clear };

    void set_live(VertexId v) {
        if (!count_inputs_ && g_.is_input(v)) return;
        if (live_[v] != epoch_) {
            live_[v] = epoch_;
            ++live_count_;
            journal_.push_back({Op::set, v});
        }
    }

    void clear_live(VertexId v) {
        if (live_[v] == epoch_) {
            live_[v] = 0;
            --live_count_;
            journal_.push_back({Op::clear, v});
        }
    }

    const Cdag& g_;
    bool count_inputs_;
    std::vector<std::uint32_t> rem_succ_;
    std::vector<std::uint32_t> live_;
    std::uint32_t epoch_ = 0;
    std::uint64_t live_count_ = 0;
    std::uint64_t last_transient_ = 0;
    std::vector<std::pair<Op, VertexId>> journal_;
};

inline bool prefers_neighbor(std::uint64_t taken_neighbors, std::uint64_t taken_successors,
                             Priority priority) {
    if (priority.den == 0) return true;
    return taken_neighbors * priority.den < taken_successors * priority.num;
}

// One GenerateConvexComponents pass over a level graph.
class LevelRun {
public:
    LevelRun(const LevelGraph& lg, Liveness& liveness, std::uint64_t capacity, Priority priority)
        : lg_(lg),
          liveness_(liveness),
          capacity_(capacity),
          priority_(priority),
          assigned_(lg.n, 0),
          readied_(lg.n, 0),
          rem_pred_(lg.n, 0),
          nbr_queued_(lg.n, 0),
          succ_queued_(lg.n, 0),
          nbr_seen_(lg.n, 0) {}

    Partition run() {
        Partition part;
        part.capacity = capacity_;
        part.assignment.assign(lg_.n, kUnassigned);

        for (std::uint32_t v = 0; v < lg_.n; ++v) {
            rem_pred_[v] = static_cast<std::uint32_t>(lg_.preds(v).size());
            if (rem_pred_[v] == 0) push_ready(v);
        }

        while (auto first = front_ready()) grow_component(part, *first);
        return part;
    }

private:
    void push_ready(std::uint32_t v) {
        ready_.push_back(v);
        readied_[v] = 1;
    }

    bool in_ready_list(std::uint32_t v) const { return readied_[v] && !assigned_[v]; }

    // selectReadyNode: FIFO over readiness order, skipping assigned entries.
    std::optional<std::uint32_t> front_ready() {
        while (ready_head_ < ready_.size() && assigned_[ready_[ready_head_]]) ++ready_head_;
        if (ready_head_ == ready_.size()) return std::nullopt;
        return ready_[ready_head_];
    }

    void assign(Partition& part, ConvexComponent& cc, std::uint32_t comp_index, std::uint32_t v) {
        assigned_[v] = 1;
        part.assignment[v] = comp_index;
        cc.members.push_back(v);
        for (std::uint32_t s : lg_.succs(v))
            if (--rem_pred_[s] == 0) push_ready(s);
    }

    bool fire_node(std::uint32_t v, std::uint64_t capacity, std::uint64_t* peak) {
        std::size_t m = liveness_.mark();
        for (VertexId b : lg_.base_nodes(v)) {
            if (!liveness_.fire(b, capacity)) {
                liveness_.rollback(m);
                return false;
            }
            *peak = std::max(*peak, liveness_.last_fire_transient());
        }
        return true;
    }

    void grow_component(Partition& part, std::uint32_t first) {
        std::uint32_t comp_index = static_cast<std::uint32_t>(part.components.size());
        ConvexComponent cc;
        cc.creation_index = comp_index;
        liveness_.new_component();
        ++comp_epoch_;
        nbr_queue_.clear();
        succ_queue_.clear();
        std::uint64_t taken_neighbors = 0, taken_successors = 0;

        std::uint32_t n = first;
        while (true) {
            std::uint64_t peak = cc.peak_liveset;
            if (!fire_node(n, capacity_, &peak)) {
                if (cc.members.empty()) {
                    // A lone first node over capacity is taken anyway so the
                    // run always makes progress; the component is flagged and
                    // closed immediately.
                    fire_node(n, kNoCapacity, &peak);
                    cc.peak_liveset = peak;
                    cc.forced_first = true;
                    assign(part, cc, comp_index, n);
                }
                break;
            }
            cc.peak_liveset = peak;
            assign(part, cc, comp_index, n);

            auto next = select_best_node(n, taken_neighbors, taken_successors);
            if (!next) break;
            n = *next;
        }
        part.components.push_back(std::move(cc));
    }

    // selectBestNode: queue the latest node's ready neighbors and ready
    // successors, then pick per the taken-counter ratio, falling back to the
    // global ready list.
    std::optional<std::uint32_t> select_best_node(std::uint32_t last,
                                                  std::uint64_t& taken_neighbors,
                                                  std::uint64_t& taken_successors) {
        ++nbr_scan_epoch_;
        for (std::uint32_t s : lg_.succs(last))
            for (std::uint32_t u : lg_.preds(s)) {
                if (u == last || nbr_seen_[u] == nbr_scan_epoch_) continue;
                nbr_seen_[u] = nbr_scan_epoch_;
                if (in_ready_list(u) && nbr_queued_[u] != comp_epoch_) {
                    nbr_queued_[u] = comp_epoch_;
                    nbr_queue_.push_back(u);
                }
            }
        for (std::uint32_t s : lg_.succs(last))
            if (in_ready_list(s) && succ_queued_[s] != comp_epoch_) {
                succ_queued_[s] = comp_epoch_;
                succ_queue_.push_back(s);
            }

        purge(nbr_queue_);
        purge(succ_queue_);

        if (prefers_neighbor(taken_neighbors, taken_successors, priority_) && !nbr_queue_.empty()) {
            std::uint32_t next = nbr_queue_.front();
            nbr_queue_.pop_front();
            ++taken_neighbors;
            return next;
        }
        if (!succ_queue_.empty()) {
            std::uint32_t next = succ_queue_.front();
            succ_queue_.pop_front();
            ++taken_successors;
            return next;
        }
        return front_ready();
    }

    // Entries assigned since they were queued (including via the other
    // queue) are dropped lazily.
    void purge(std::deque<std::uint32_t>& q) {
        while (!q.empty() && assigned_[q.front()]) q.pop_front();
    }

    const LevelGraph& lg_;
    Liveness& liveness_;
    std::uint64_t capacity_;
    Priority priority_;

    std::vector<std::uint8_t> assigned_, readied_;
    std::vector<std::uint32_t> rem_pred_;
    std::vector<std::uint32_t> ready_;
    std::size_t ready_head_ = 0;

    std::deque<std::uint32_t> nbr_queue_, succ_queue_;
    std::vector<std::uint32_t> nbr_queued_, succ_queued_, nbr_seen_;
    std::uint32_t comp_epoch_ = 0;
    std::uint32_t nbr_scan_epoch_ = 0;
};

}  // namespace locpot::detail
