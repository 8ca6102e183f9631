#include "locpot/rda.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <unordered_map>

namespace locpot {

namespace {

// Fenwick tree over trace positions; a set bit marks the most recent access
// position of some address.
class BitTree {
public:
    explicit BitTree(std::size_t n) : tree_(n + 1, 0) {}

    void add(std::size_t pos, std::int64_t delta) {
        for (std::size_t i = pos + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
    }

    // sum of marks at positions [0, pos]
    std::int64_t prefix(std::size_t pos) const {
        std::int64_t sum = 0;
        for (std::size_t i = pos + 1; i > 0; i -= i & (~i + 1)) sum += tree_[i];
        return sum;
    }

private:
    std::vector<std::int64_t> tree_;
};

}  // namespace

ReuseProfile reuse_distances(std::span<const Addr> refs) {
    ReuseProfile p;
    p.total_refs = refs.size();
    p.distances.reserve(refs.size());

    BitTree marks(refs.size());
    std::unordered_map<Addr, std::size_t> last_pos;
    last_pos.reserve(refs.size());
    std::uint64_t max_finite = 0;
    bool any_finite = false;

    for (std::size_t i = 0; i < refs.size(); ++i) {
        auto it = last_pos.find(refs[i]);
        if (it == last_pos.end()) {
            p.distances.push_back(kInfiniteDistance);
            ++p.inf_count;
            last_pos.emplace(refs[i], i);
        } else {
            std::size_t prev = it->second;
            // distinct addresses touched strictly between prev and i
            std::int64_t d = marks.prefix(i - 1) - marks.prefix(prev);
            p.distances.push_back(static_cast<std::uint64_t>(d));
            max_finite = std::max(max_finite, static_cast<std::uint64_t>(d));
            any_finite = true;
            marks.add(prev, -1);
            it->second = i;
        }
        marks.add(i, +1);
    }
    p.distinct_addrs = last_pos.size();

    p.histogram.assign(any_finite ? max_finite + 1 : 0, 0);
    for (std::uint64_t d : p.distances)
        if (d != kInfiniteDistance) ++p.histogram[d];
    return p;
}

MissCurve miss_curve(const ReuseProfile& p, std::span<const std::uint64_t> sizes,
                     std::uint64_t total_flops, std::uint32_t word_bytes) {
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1])
            throw std::invalid_argument("cache sizes must be strictly increasing");

    std::vector<std::uint64_t> cumulative(p.histogram.size(), 0);
    std::uint64_t running = 0;
    for (std::size_t d = 0; d < p.histogram.size(); ++d) {
        running += p.histogram[d];
        cumulative[d] = running;
    }
    std::uint64_t total_finite = running;

    MissCurve m;
    m.total_flops = total_flops;
    m.word_bytes = word_bytes;
    m.total_refs = p.total_refs;
    m.distinct_addrs = p.distinct_addrs;
    m.points.reserve(sizes.size());
    for (std::uint64_t c : sizes) {
        std::uint64_t hits = cumulative.empty()            ? 0
                             : c >= cumulative.size() - 1 ? total_finite
                                                          : cumulative[c];
        MissCurvePoint pt;
        pt.cache_size_words = c;
        pt.hits = hits;
        pt.misses = p.total_refs - hits;
        pt.miss_ratio = p.total_refs ? static_cast<double>(pt.misses) / static_cast<double>(p.total_refs) : 0.0;
        m.points.push_back(pt);
    }
    return m;
}

std::vector<std::pair<std::uint64_t, double>> bytes_per_flop(const MissCurve& m) {
    if (m.total_flops == 0) throw std::invalid_argument("bytes_per_flop undefined for zero flops");
    std::vector<std::pair<std::uint64_t, double>> out;
    out.reserve(m.points.size());
    for (const auto& pt : m.points)
        out.emplace_back(pt.cache_size_words,
                         static_cast<double>(pt.misses) * m.word_bytes /
                             static_cast<double>(m.total_flops));
    return out;
}

std::vector<Addr> replay(const Trace& t, std::span<const std::uint64_t> order) {
    if (order.size() != t.records.size())
        throw std::invalid_argument("order is not a permutation of the record ids");
    std::vector<std::uint8_t> seen(t.records.size(), 0);
    for (std::uint64_t id : order) {
        if (id >= t.records.size() || seen[id])
            throw std::invalid_argument("order is not a permutation of the record ids");
        seen[id] = 1;
    }
    std::vector<Addr> refs;
    refs.reserve(t.total_refs());
    for (std::uint64_t id : order) {
        const auto& rec = t.records[id];
        refs.insert(refs.end(), rec.reads.begin(), rec.reads.end());
        refs.push_back(rec.write);
    }
    return refs;
}

std::vector<std::uint64_t> default_cache_sizes(std::uint64_t footprint) {
    std::vector<std::uint64_t> sizes;
    for (std::uint64_t c = 1; c <= footprint; c *= 2) {
        sizes.push_back(c);
        if (c > footprint / 2) break;  // overflow guard
    }
    if (sizes.empty() || sizes.back() != footprint) sizes.push_back(std::max<std::uint64_t>(footprint, 1));
    return sizes;
}

void write_csv(const MissCurve& m, std::ostream& os) {
    char buf[64];
    os << "# locpot reuse-distance curve\n";
    os << "# hit_convention: hit iff reuse distance <= C\n";
    os << "# word_bytes: " << m.word_bytes << '\n';
    os << "# total_refs: " << m.total_refs << " total_flops: " << m.total_flops
       << " distinct_addrs: " << m.distinct_addrs << '\n';
    os << "cache_size_words,misses,hits,miss_ratio,bytes_per_flop\n";
    for (const auto& pt : m.points) {
        double bpf = m.total_flops ? static_cast<double>(pt.misses) * m.word_bytes /
                                         static_cast<double>(m.total_flops)
                                   : 0.0;
        std::snprintf(buf, sizeof buf, "%.10g,%.10g", pt.miss_ratio, bpf);
        os << pt.cache_size_words << ',' << pt.misses << ',' << pt.hits << ',' << buf << '\n';
    }
}

void write_csv(const MissCurve& m, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_csv(m, os);
}

}  // namespace locpot
