#include "locpot/partition.hpp"

#include <charconv>
#include <numeric>
#include <ostream>

#include "partition_engine.hpp"

namespace locpot {

namespace {

void validate_params(const HeuristicParams& params) {
    if (params.capacity < 1) throw std::invalid_argument("maxlive capacity must be >= 1");
    if (params.priority.num == 0 && params.priority.den == 0)
        throw std::invalid_argument("priority 0/0 is not a ratio");
}

}  // namespace

Priority Priority::parse(std::string_view s) {
    if (s == "breadth") return breadth();
    if (s == "depth") return depth();
    if (s == "equal") return equal();
    auto parse_int = [](std::string_view t) -> std::optional<std::uint64_t> {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
        return v;
    };
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = parse_int(s.substr(0, slash));
        auto den = parse_int(s.substr(slash + 1));
        if (!num || !den || *den == 0 || *num == 0)
            throw std::invalid_argument("bad priority ratio: " + std::string(s));
        std::uint64_t g = std::gcd(*num, *den);
        return {*num / g, *den / g};
    }
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        auto whole = parse_int(s.substr(0, dot));
        std::string_view frac = s.substr(dot + 1);
        auto frac_v = parse_int(frac);
        if (!whole || !frac_v || frac.empty() || frac.size() > 9)
            throw std::invalid_argument("bad priority: " + std::string(s));
        std::uint64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        std::uint64_t num = *whole * den + *frac_v;
        if (num == 0) throw std::invalid_argument("priority must be positive");
        std::uint64_t g = std::gcd(num, den);
        return {num / g, den / g};
    }
    auto v = parse_int(s);
    if (!v || *v == 0) throw std::invalid_argument("bad priority: " + std::string(s));
    return {*v, 1};
}

std::string Priority::to_string() const {
    if (den == 0) return "inf";
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

Partition generate_convex_components(const Cdag& g, const HeuristicParams& params) {
    validate_params(params);
    detail::LevelGraph lg = detail::base_level(g);
    detail::Liveness liveness(g, params.count_inputs_in_liveset);
    liveness.reset_level();
    return detail::LevelRun(lg, liveness, params.capacity, params.priority).run();
}

MultiLevelResult multi_level_partitioning(const Cdag& g, const HeuristicParams& params) {
    validate_params(params);
    if (params.factor < 2) throw std::invalid_argument("level growth factor must be >= 2");

    MultiLevelResult result;
    detail::LevelGraph lg = detail::base_level(g);
    detail::Liveness liveness(g, params.count_inputs_in_liveset);
    std::uint64_t capacity = params.capacity;

    liveness.reset_level();
    result.levels.push_back(detail::LevelRun(lg, liveness, capacity, params.priority).run());

    const std::uint64_t footprint = g.footprint();
    while (capacity < footprint) {
        lg = detail::macro_level(lg, result.levels.back());
        capacity *= params.factor;
        liveness.reset_level();
        result.levels.push_back(detail::LevelRun(lg, liveness, capacity, params.priority).run());
    }
    return result;
}

namespace {

void expand_component(const MultiLevelResult& r, std::size_t level, std::uint32_t comp,
                      std::vector<VertexId>& out) {
    const auto& members = r.levels[level].components[comp].members;
    if (level == 0) {
        out.insert(out.end(), members.begin(), members.end());
        return;
    }
    for (std::uint32_t child : members) expand_component(r, level - 1, child, out);
}

}  // namespace

Partition flatten_level(const MultiLevelResult& r, std::size_t level) {
    if (level >= r.levels.size()) throw std::out_of_range("no such partitioning level");
    const Partition& src = r.levels[level];
    Partition out;
    out.capacity = src.capacity;
    out.assignment.assign(r.levels[0].assignment.size(), detail::kUnassigned);
    out.components.reserve(src.components.size());
    for (std::uint32_t c = 0; c < src.components.size(); ++c) {
        ConvexComponent cc;
        cc.creation_index = c;
        cc.peak_liveset = src.components[c].peak_liveset;
        cc.forced_first = src.components[c].forced_first;
        expand_component(r, level, c, cc.members);
        for (VertexId v : cc.members) out.assignment[v] = c;
        out.components.push_back(std::move(cc));
    }
    return out;
}

bool verify_convexity(const Cdag& g, const Partition& p) {
    std::vector<std::uint32_t> visit_epoch(g.num_vertices(), 0);
    std::uint32_t epoch = 0;
    std::vector<VertexId> stack;

    for (std::uint32_t c = 0; c < p.components.size(); ++c) {
        ++epoch;
        stack.clear();
        for (VertexId v : p.components[c].members)
            for (VertexId s : g.successors(v))
                if (p.assignment[s] != c && visit_epoch[s] != epoch) {
                    visit_epoch[s] = epoch;
                    stack.push_back(s);
                }
        // a path that leaves the component must never re-enter it
        while (!stack.empty()) {
            VertexId w = stack.back();
            stack.pop_back();
            for (VertexId s : g.successors(w)) {
                if (p.assignment[s] == c) return false;
                if (visit_epoch[s] != epoch) {
                    visit_epoch[s] = epoch;
                    stack.push_back(s);
                }
            }
        }
    }
    return true;
}

void write_partition(const Partition& p, std::ostream& os) {
    for (std::uint32_t c = 0; c < p.components.size(); ++c) {
        const auto& cc = p.components[c];
        os << "component " << c << ":";
        for (VertexId v : cc.members) os << ' ' << v;
        os << '\n';
        os << "# size=" << cc.members.size() << " peak_liveset=" << cc.peak_liveset
           << " forced_first=" << (cc.forced_first ? 1 : 0) << '\n';
    }
}

}  // namespace locpot
