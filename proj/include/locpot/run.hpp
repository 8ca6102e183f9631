#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "locpot/partition.hpp"
#include "locpot/trace.hpp"

namespace locpot {

/// One end-to-end invocation: a kernel (or trace file), a sweep of heuristic
/// parameters, and the cache sizes to evaluate. Produces one CSV per curve
/// plus a TSV summary under out_dir.
struct RunConfig {
    std::optional<KernelSpec> kernel;
    std::optional<std::filesystem::path> trace_in;

    std::vector<std::uint64_t> maxlive = {256};
    std::vector<Priority> priorities = {Priority::equal()};
    bool multilevel = false;
    std::uint64_t factor = 2;
    bool count_inputs_in_liveset = true;

    std::vector<std::uint64_t> sizes;  // empty -> default_cache_sizes(footprint)
    std::uint32_t word_bytes = 0;      // 0 -> keep the trace's word size
    bool compare_tiled = false;

    std::filesystem::path out_dir = ".";
    std::optional<std::filesystem::path> trace_out;
    std::optional<std::filesystem::path> cdag_out;
    bool dump_partitions = false;
    bool dump_schedules = false;
};

struct VariantResult {
    std::string variant;  // original | reordered | tiled
    std::string maxlive;
    std::string priority;
    std::string levels;
    std::string components;
    std::string peak_liveset;
    double runtime_ms = 0.0;
    std::filesystem::path csv;
};

struct RunSummary {
    std::vector<VariantResult> rows;
    std::filesystem::path summary_path;
    std::uint64_t footprint = 0;
};

RunSummary run(const RunConfig& config);

}  // namespace locpot
