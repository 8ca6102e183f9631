#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "locpot/trace.hpp"

namespace locpot {

/// Reuse distance of a first touch.
inline constexpr std::uint64_t kInfiniteDistance = std::numeric_limits<std::uint64_t>::max();

/// Per-reference reuse distances plus their histogram. The distance of a
/// reference is the number of distinct addresses touched strictly between it
/// and the previous reference to the same address.
struct ReuseProfile {
    std::vector<std::uint64_t> distances;
    std::vector<std::uint64_t> histogram;  // histogram[d] = #references with finite distance d
    std::uint64_t inf_count = 0;
    std::uint64_t total_refs = 0;
    std::uint64_t distinct_addrs = 0;

    bool operator==(const ReuseProfile&) const = default;
};

struct MissCurvePoint {
    std::uint64_t cache_size_words = 0;
    std::uint64_t misses = 0;
    std::uint64_t hits = 0;
    double miss_ratio = 0.0;

    bool operator==(const MissCurvePoint&) const = default;
};

/// Misses/hits as a function of fully associative LRU capacity, plus the
/// totals needed to convert misses into bandwidth demand.
struct MissCurve {
    std::vector<MissCurvePoint> points;
    std::uint64_t total_flops = 0;
    std::uint32_t word_bytes = 8;
    std::uint64_t total_refs = 0;
    std::uint64_t distinct_addrs = 0;

    bool operator==(const MissCurve&) const = default;
};

/// O(N log N) single pass over the reference stream.
ReuseProfile reuse_distances(std::span<const Addr> refs);

/// Hit convention: a reference hits in a cache of C words iff its reuse
/// distance is finite and <= C.
MissCurve miss_curve(const ReuseProfile& p, std::span<const std::uint64_t> sizes,
                     std::uint64_t total_flops, std::uint32_t word_bytes);

/// misses * word_bytes / flops per evaluated cache size.
std::vector<std::pair<std::uint64_t, double>> bytes_per_flop(const MissCurve& m);

/// Reference stream of the trace replayed in the given record order: per
/// record, its reads in order followed by its write.
std::vector<Addr> replay(const Trace& t, std::span<const std::uint64_t> order);

/// Powers of two from 1 up to the footprint, plus the footprint itself.
std::vector<std::uint64_t> default_cache_sizes(std::uint64_t footprint);

/// CSV with '#' metadata lines, then
/// cache_size_words,misses,hits,miss_ratio,bytes_per_flop rows.
void write_csv(const MissCurve& m, std::ostream& os);
void write_csv(const MissCurve& m, const std::filesystem::path& path);

}  // namespace locpot
