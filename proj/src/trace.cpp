#include "locpot/trace.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace locpot {

std::uint64_t Trace::total_flops() const {
    std::uint64_t sum = 0;
    for (const auto& r : records) sum += r.flops;
    return sum;
}

std::uint64_t Trace::total_refs() const {
    std::uint64_t sum = 0;
    for (const auto& r : records) sum += r.reads.size() + 1;
    return sum;
}

namespace {

struct KernelName {
    Kernel kernel;
    std::string_view name;
};

constexpr KernelName kKernelNames[] = {
    {Kernel::seidel, "seidel"},
    {Kernel::seidel_tiled, "seidel_tiled"},
    {Kernel::jacobi2d, "jacobi2d"},
    {Kernel::jacobi2d_tiled, "jacobi2d_tiled"},
    {Kernel::matmul, "matmul"},
    {Kernel::matmul_tiled, "matmul_tiled"},
    {Kernel::floyd_warshall, "floyd_warshall"},
    {Kernel::givens, "givens"},
    {Kernel::householder, "householder"},
    {Kernel::oddeven_sort, "oddeven_sort"},
    {Kernel::lu_nonblocked, "lu_nonblocked"},
};

struct DatasetName {
    Dataset dataset;
    std::string_view name;
};

constexpr DatasetName kDatasetNames[] = {
    {Dataset::random, "random"},
    {Dataset::reverse_sorted, "reverse_sorted"},
    {Dataset::pivot_half, "pivot_half"},
    {Dataset::pivot_all, "pivot_all"},
};

}  // namespace

Kernel kernel_from_name(std::string_view name) {
    for (const auto& entry : kKernelNames)
        if (entry.name == name) return entry.kernel;
    throw std::invalid_argument("unknown kernel name: " + std::string(name));
}

std::string_view kernel_name(Kernel k) {
    for (const auto& entry : kKernelNames)
        if (entry.kernel == k) return entry.name;
    return "?";
}

Dataset dataset_from_name(std::string_view name) {
    for (const auto& entry : kDatasetNames)
        if (entry.name == name) return entry.dataset;
    throw std::invalid_argument("unknown dataset name: " + std::string(name));
}

std::string_view dataset_name(Dataset d) {
    for (const auto& entry : kDatasetNames)
        if (entry.dataset == d) return entry.name;
    return "?";
}

bool has_tiled_variant(Kernel k) {
    return k == Kernel::seidel || k == Kernel::jacobi2d || k == Kernel::matmul;
}

Kernel tiled_variant(Kernel k) {
    switch (k) {
        case Kernel::seidel: return Kernel::seidel_tiled;
        case Kernel::jacobi2d: return Kernel::jacobi2d_tiled;
        case Kernel::matmul: return Kernel::matmul_tiled;
        default:
            throw std::invalid_argument(std::string("kernel has no tiled variant: ") +
                                        std::string(kernel_name(k)));
    }
}

TraceParseError::TraceParseError(std::size_t line, const std::string& message)
    : std::runtime_error("trace line " + std::to_string(line) + ": " + message), line(line) {}

void write_trace(const Trace& t, std::ostream& os) {
    os << "locpot-trace v1 word_bytes=" << t.word_bytes << '\n';
    for (const auto& r : t.records) {
        os << r.id << " f=" << r.flops << " r=";
        for (std::size_t i = 0; i < r.reads.size(); ++i) {
            if (i) os << ',';
            os << r.reads[i];
        }
        os << " w=" << r.write << '\n';
    }
}

void write_trace(const Trace& t, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_trace(t, os);
}

namespace {

std::uint64_t parse_u64(std::string_view token, std::size_t line, std::string_view what) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw TraceParseError(line, "bad " + std::string(what) + ": '" + std::string(token) + "'");
    return value;
}

}  // namespace

Trace read_trace(std::istream& is) {
    Trace t;
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(is, line)) throw TraceParseError(1, "missing header");
    ++lineno;
    {
        std::istringstream hs(line);
        std::string magic, version, wb;
        hs >> magic >> version >> wb;
        if (magic != "locpot-trace" || version != "v1")
            throw TraceParseError(lineno, "bad header: '" + line + "'");
        constexpr std::string_view prefix = "word_bytes=";
        if (wb.rfind(prefix, 0) != 0) throw TraceParseError(lineno, "missing word_bytes");
        t.word_bytes =
            static_cast<std::uint32_t>(parse_u64(std::string_view(wb).substr(prefix.size()), lineno, "word_bytes"));
    }

    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string id_tok, f_tok, r_tok, w_tok;
        if (!(ls >> id_tok >> f_tok >> r_tok >> w_tok))
            throw TraceParseError(lineno, "expected '<id> f=<flops> r=<addrs> w=<addr>'");
        std::string extra;
        if (ls >> extra) throw TraceParseError(lineno, "trailing token '" + extra + "'");

        TraceRecord rec;
        rec.id = parse_u64(id_tok, lineno, "record id");
        if (rec.id != t.records.size())
            throw TraceParseError(lineno, "record id " + id_tok + " out of sequence");
        if (f_tok.rfind("f=", 0) != 0) throw TraceParseError(lineno, "missing f= field");
        rec.flops = static_cast<std::uint32_t>(parse_u64(std::string_view(f_tok).substr(2), lineno, "flops"));
        if (r_tok.rfind("r=", 0) != 0) throw TraceParseError(lineno, "missing r= field");
        std::string_view reads = std::string_view(r_tok).substr(2);
        while (!reads.empty()) {
            auto comma = reads.find(',');
            std::string_view one = reads.substr(0, comma);
            rec.reads.push_back(parse_u64(one, lineno, "read address"));
            if (comma == std::string_view::npos) break;
            reads.remove_prefix(comma + 1);
            if (reads.empty()) throw TraceParseError(lineno, "trailing comma in r=");
        }
        if (w_tok.rfind("w=", 0) != 0) throw TraceParseError(lineno, "missing w= field");
        rec.write = parse_u64(std::string_view(w_tok).substr(2), lineno, "write address");
        t.records.push_back(std::move(rec));
    }
    return t;
}

Trace read_trace(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    return read_trace(is);
}

}  // namespace locpot
