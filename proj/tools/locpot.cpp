#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "locpot/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "locpot: estimates the data-locality potential of a computation by\n"
        "building its dependence graph from a trace, reordering the operations\n"
        "with maxlive-bounded convex partitioning, and comparing reuse-distance\n"
        "profiles of the original, reordered, and tiled schedules."};

    std::string kernel, dataset = "random", trace_in;
    std::uint64_t n = 0, m = 0, tile = 0, steps = 0, seed = 0, factor = 2;
    std::vector<std::string> maxlive;
    std::vector<std::string> priorities;
    std::vector<std::uint64_t> sizes;
    std::uint32_t word_bytes = 0;
    std::string out_dir = ".", trace_out, cdag_out;
    bool multilevel = false, compare_tiled = false, no_input_liveness = false;
    bool dump_partitions = false, dump_schedules = false;

    app.add_option("--kernel", kernel, "kernel name (seidel, seidel_tiled, jacobi2d, "
                                       "jacobi2d_tiled, matmul, matmul_tiled, floyd_warshall, "
                                       "givens, householder, oddeven_sort, lu_nonblocked)");
    app.add_option("--n", n, "problem size");
    app.add_option("--m", m, "second dimension (givens/householder rows)");
    app.add_option("--tile", tile, "tile size for tiled variants");
    app.add_option("--steps", steps, "time steps (jacobi2d)");
    app.add_option("--seed", seed, "seed for value-dependent kernels");
    app.add_option("--dataset", dataset,
                   "dataset for value-dependent kernels: random, reverse_sorted, "
                   "pivot_half, pivot_all");
    app.add_option("--trace-in", trace_in, "read the trace from a file instead of a kernel");
    app.add_option("--maxlive", maxlive,
                   "maxlive capacity in words, integer or scientific like 1e9 (repeatable)");
    app.add_option("--priority", priorities,
                   "growth priority: breadth, depth, equal, or a ratio (repeatable)");
    app.add_flag("--multilevel", multilevel, "multi-level partitioning");
    app.add_option("--factor", factor, "capacity growth factor per level");
    app.add_option("--sizes", sizes, "cache sizes to evaluate, in words")->delimiter(',');
    app.add_option("--word-bytes", word_bytes, "bytes per word (default: trace header, 8)");
    app.add_option("--out", out_dir, "output directory for CSV curves and summary.tsv");
    app.add_flag("--compare-tiled", compare_tiled, "also profile the kernel's tiled variant");
    app.add_flag("--no-input-liveness", no_input_liveness,
                 "exclude program inputs from the liveset");
    app.add_option("--trace-out", trace_out, "also write the generated trace to a file");
    app.add_option("--dump-cdag", cdag_out, "write the dependence graph edge list to a file");
    app.add_flag("--dump-partitions", dump_partitions, "write partition dumps next to the CSVs");
    app.add_flag("--dump-schedules", dump_schedules, "write schedule dumps next to the CSVs");

    CLI11_PARSE(app, argc, argv);

    try {
        locpot::RunConfig config;
        if (!kernel.empty()) {
            locpot::KernelSpec spec;
            spec.kernel = locpot::kernel_from_name(kernel);
            spec.n = n;
            spec.m = m;
            spec.tile = tile;
            spec.time_steps = steps;
            spec.seed = seed;
            spec.dataset = locpot::dataset_from_name(dataset);
            config.kernel = spec;
        }
        if (!trace_in.empty()) config.trace_in = trace_in;
        if (!maxlive.empty()) {
            config.maxlive.clear();
            for (const auto& text : maxlive) {
                double value = std::stod(text);
                if (value < 1 || value > 1e18)
                    throw std::invalid_argument("maxlive out of range: " + text);
                config.maxlive.push_back(static_cast<std::uint64_t>(value));
            }
        }
        config.priorities.clear();
        for (const auto& p : priorities) config.priorities.push_back(locpot::Priority::parse(p));
        if (config.priorities.empty()) config.priorities = {locpot::Priority::equal()};
        config.multilevel = multilevel;
        config.factor = factor;
        config.count_inputs_in_liveset = !no_input_liveness;
        config.sizes = sizes;
        config.word_bytes = word_bytes;
        config.compare_tiled = compare_tiled;
        config.out_dir = out_dir;
        if (!trace_out.empty()) config.trace_out = trace_out;
        if (!cdag_out.empty()) config.cdag_out = cdag_out;
        config.dump_partitions = dump_partitions;
        config.dump_schedules = dump_schedules;

        locpot::RunSummary summary = locpot::run(config);
        for (const auto& row : summary.rows)
            std::printf("%-10s maxlive=%-6s priority=%-6s levels=%-3s components=%-8s "
                        "peak_liveset=%-8s %8.2f ms  %s\n",
                        row.variant.c_str(), row.maxlive.c_str(), row.priority.c_str(),
                        row.levels.c_str(), row.components.c_str(), row.peak_liveset.c_str(),
                        row.runtime_ms, row.csv.string().c_str());
        std::printf("footprint=%llu words, summary: %s\n",
                    static_cast<unsigned long long>(summary.footprint),
                    summary.summary_path.string().c_str());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
