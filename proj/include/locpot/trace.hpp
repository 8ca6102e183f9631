#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace locpot {

// Abstract word address. Addresses are dense identifiers handed out by the
// trace generators; nothing assumes they map to real memory.
using Addr = std::uint64_t;

/// One dynamic operation: the word addresses it reads, the single word
/// address it writes, and the number of floating-point operations it stands
/// for. Record ids are consecutive from 0 and define the original execution
/// order.
struct TraceRecord {
    std::uint64_t id = 0;
    std::vector<Addr> reads;  // may be empty; duplicates removed per record
    Addr write = 0;
    std::uint32_t flops = 0;

    bool operator==(const TraceRecord&) const = default;
};

struct Trace {
    std::vector<TraceRecord> records;
    std::uint32_t word_bytes = 8;

    std::uint64_t total_flops() const;
    std::uint64_t total_refs() const;  // sum over records of |reads| + 1

    bool operator==(const Trace&) const = default;
};

enum class Kernel {
    seidel,
    seidel_tiled,
    jacobi2d,
    jacobi2d_tiled,
    matmul,
    matmul_tiled,
    floyd_warshall,
    givens,
    householder,
    oddeven_sort,
    lu_nonblocked,
};

enum class Dataset { random, reverse_sorted, pivot_half, pivot_all };

struct KernelSpec {
    Kernel kernel = Kernel::seidel;
    std::uint64_t n = 0;
    std::uint64_t m = 0;           // rows for givens/householder; defaults to n
    std::uint64_t tile = 0;        // tiled variants; defaults to min(4, n)
    std::uint64_t time_steps = 0;  // jacobi2d; defaults to 1
    std::uint64_t seed = 0;        // value-dependent kernels
    Dataset dataset = Dataset::random;
};

Kernel kernel_from_name(std::string_view name);  // throws std::invalid_argument
std::string_view kernel_name(Kernel k);
Dataset dataset_from_name(std::string_view name);
std::string_view dataset_name(Dataset d);

/// Kernels that have a tiled twin executing the same set of operations in a
/// different order.
bool has_tiled_variant(Kernel k);
Kernel tiled_variant(Kernel k);  // throws if !has_tiled_variant(k)

/// Expands the dynamic statement instances of the requested kernel into a
/// trace. Deterministic for a given spec.
Trace generate_trace(const KernelSpec& spec);

struct TraceParseError : std::runtime_error {
    TraceParseError(std::size_t line, const std::string& message);
    std::size_t line;
};

// Text format: header "locpot-trace v1 word_bytes=<k>", then one line per
// record: "<id> f=<flops> r=<a1,a2,...> w=<addr>" (r= may be empty).
void write_trace(const Trace& t, std::ostream& os);
void write_trace(const Trace& t, const std::filesystem::path& path);
Trace read_trace(std::istream& is);
Trace read_trace(const std::filesystem::path& path);

}  // namespace locpot
