#include "locpot/run.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "locpot/cdag.hpp"
#include "locpot/rda.hpp"
#include "locpot/schedule.hpp"

namespace locpot {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == '/') c = '-';
    return s;
}

MissCurve curve_for_order(const Trace& trace, std::span<const std::uint64_t> order,
                          std::span<const std::uint64_t> sizes) {
    std::vector<Addr> refs = replay(trace, order);
    ReuseProfile profile = reuse_distances(refs);
    return miss_curve(profile, sizes, trace.total_flops(), trace.word_bytes);
}

std::vector<std::uint64_t> identity_order(const Trace& trace) {
    std::vector<std::uint64_t> order(trace.records.size());
    std::iota(order.begin(), order.end(), 0);
    return order;
}

}  // namespace

RunSummary run(const RunConfig& config) {
    if (config.kernel.has_value() == config.trace_in.has_value())
        throw std::invalid_argument("exactly one of kernel or trace-in must be given");
    if (config.maxlive.empty()) throw std::invalid_argument("maxlive sweep must be non-empty");
    if (config.priorities.empty()) throw std::invalid_argument("priority sweep must be non-empty");

    std::filesystem::create_directories(config.out_dir);

    Trace trace = config.kernel ? generate_trace(*config.kernel) : read_trace(*config.trace_in);
    if (config.word_bytes) trace.word_bytes = config.word_bytes;
    if (config.trace_out) {
        if (config.trace_out->has_parent_path())
            std::filesystem::create_directories(config.trace_out->parent_path());
        write_trace(trace, *config.trace_out);
    }

    Cdag g = build_cdag(trace);
    if (config.cdag_out) {
        if (config.cdag_out->has_parent_path())
            std::filesystem::create_directories(config.cdag_out->parent_path());
        std::ofstream os(*config.cdag_out);
        if (!os) throw std::runtime_error("cannot open " + config.cdag_out->string());
        write_edge_list(g, os);
    }

    std::vector<std::uint64_t> sizes =
        config.sizes.empty() ? default_cache_sizes(g.footprint()) : config.sizes;

    RunSummary summary;
    summary.footprint = g.footprint();

    {
        auto start = Clock::now();
        MissCurve original = curve_for_order(trace, identity_order(trace), sizes);
        VariantResult row;
        row.variant = "original";
        row.maxlive = row.priority = row.levels = row.components = row.peak_liveset = "-";
        row.csv = config.out_dir / "original.csv";
        write_csv(original, row.csv);
        row.runtime_ms = ms_since(start);
        summary.rows.push_back(std::move(row));
    }

    for (std::uint64_t maxlive : config.maxlive) {
        for (const Priority& priority : config.priorities) {
            HeuristicParams params;
            params.capacity = maxlive;
            params.priority = priority;
            params.multilevel = config.multilevel;
            params.factor = config.factor;
            params.count_inputs_in_liveset = config.count_inputs_in_liveset;

            auto start = Clock::now();
            Schedule schedule;
            std::size_t levels = 1;
            const std::vector<ConvexComponent>* final_components = nullptr;
            Partition single;
            MultiLevelResult multi;
            if (config.multilevel) {
                multi = multi_level_partitioning(g, params);
                schedule = linearize(g, multi);
                levels = multi.levels.size();
                final_components = &multi.final_level().components;
            } else {
                single = generate_convex_components(g, params);
                schedule = linearize(g, single);
                final_components = &single.components;
            }
            std::uint64_t peak = 0;
            for (const auto& cc : *final_components) peak = std::max(peak, cc.peak_liveset);

            std::string tag = "m" + std::to_string(maxlive) + "_p" + sanitize(priority.to_string()) +
                              (config.multilevel ? "_ml" : "_sl");
            MissCurve curve = curve_for_order(trace, schedule.order, sizes);

            VariantResult row;
            row.variant = "reordered";
            row.maxlive = std::to_string(maxlive);
            row.priority = priority.to_string();
            row.levels = std::to_string(levels);
            row.components = std::to_string(final_components->size());
            row.peak_liveset = std::to_string(peak);
            row.csv = config.out_dir / ("reordered_" + tag + ".csv");
            write_csv(curve, row.csv);
            row.runtime_ms = ms_since(start);

            if (config.dump_partitions) {
                std::ofstream os(config.out_dir / ("partition_" + tag + ".txt"));
                write_partition(config.multilevel ? flatten_level(multi, multi.levels.size() - 1)
                                                  : single,
                                os);
            }
            if (config.dump_schedules) {
                std::ofstream os(config.out_dir / ("schedule_" + tag + ".txt"));
                write_schedule(schedule, os);
            }
            summary.rows.push_back(std::move(row));
        }
    }

    if (config.compare_tiled) {
        if (!config.kernel || !has_tiled_variant(config.kernel->kernel))
            throw std::invalid_argument("compare-tiled needs a kernel with a tiled variant");
        KernelSpec tiled_spec = *config.kernel;
        tiled_spec.kernel = tiled_variant(config.kernel->kernel);
        auto start = Clock::now();
        Trace tiled = generate_trace(tiled_spec);
        if (config.word_bytes) tiled.word_bytes = config.word_bytes;
        MissCurve curve = curve_for_order(tiled, identity_order(tiled), sizes);
        VariantResult row;
        row.variant = "tiled";
        row.maxlive = row.priority = row.levels = row.components = row.peak_liveset = "-";
        row.csv = config.out_dir / "tiled.csv";
        write_csv(curve, row.csv);
        row.runtime_ms = ms_since(start);
        summary.rows.push_back(std::move(row));
    }

    summary.summary_path = config.out_dir / "summary.tsv";
    std::ofstream os(summary.summary_path);
    if (!os) throw std::runtime_error("cannot open " + summary.summary_path.string());
    os << "variant\tmaxlive\tpriority\tlevels\tcomponents\tpeak_liveset\truntime_ms\n";
    char buf[32];
    for (const auto& row : summary.rows) {
        std::snprintf(buf, sizeof buf, "%.3f", row.runtime_ms);
        os << row.variant << '\t' << row.maxlive << '\t' << row.priority << '\t' << row.levels
           << '\t' << row.components << '\t' << row.peak_liveset << '\t' << buf << '\n';
    }
    return summary;
}

}  // namespace locpot
