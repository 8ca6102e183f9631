#include <doctest.h>

#include <set>
#include <sstream>

#include "locpot/trace.hpp"
#include "oracles.hpp"

using namespace locpot;

namespace {

KernelSpec spec_of(Kernel k, std::uint64_t n) {
    KernelSpec s;
    s.kernel = k;
    s.n = n;
    return s;
}

}  // namespace

TEST_CASE("seidel n=6 has 16 compute records") {
    Trace t = generate_trace(spec_of(Kernel::seidel, 6));
    CHECK(t.records.size() == 16);
    for (const auto& r : t.records) {
        CHECK(r.reads.size() == 2);
        CHECK(r.flops == 1);
    }
    CHECK(t.total_refs() == 48);
    CHECK(t.total_flops() == 16);
}

TEST_CASE("matmul n=1 is a single multiply-add") {
    Trace t = generate_trace(spec_of(Kernel::matmul, 1));
    REQUIRE(t.records.size() == 1);
    CHECK(t.records[0].flops == 2);
    CHECK(t.records[0].reads.size() == 3);
}

TEST_CASE("floyd_warshall n=4 unrolls to 64 records") {
    // loop-nest oracle: k advances by two per outer step, two n^2 halves
    std::uint64_t n = 4, counted = 0;
    for (std::uint64_t k = 0; k < n; ++k) {
        counted += n * n;
        ++k;
        if (k < n) counted += n * n;
    }
    CHECK(counted == 64);
    Trace t = generate_trace(spec_of(Kernel::floyd_warshall, 4));
    CHECK(t.records.size() == counted);
}

TEST_CASE("record count formulas") {
    for (std::uint64_t n : {2, 4, 6, 8}) {
        CHECK(generate_trace(spec_of(Kernel::matmul, n)).records.size() == n * n * n);
        CHECK(generate_trace(spec_of(Kernel::seidel, n)).records.size() == (n - 2) * (n - 2));
        CHECK(generate_trace(spec_of(Kernel::floyd_warshall, n)).records.size() == n * n * n);
    }
}

TEST_CASE("record ids are consecutive from zero") {
    Trace t = generate_trace(spec_of(Kernel::givens, 5));
    for (std::size_t i = 0; i < t.records.size(); ++i) CHECK(t.records[i].id == i);
}

TEST_CASE("static-control kernels ignore seed and dataset") {
    for (Kernel k : {Kernel::seidel, Kernel::jacobi2d, Kernel::matmul, Kernel::floyd_warshall,
                     Kernel::givens, Kernel::householder}) {
        KernelSpec a = spec_of(k, 6);
        a.time_steps = 2;
        KernelSpec b = a;
        b.seed = 1234;
        CHECK(generate_trace(a) == generate_trace(b));
    }
}

TEST_CASE("tiled and untiled variants run the same operations") {
    for (Kernel k : {Kernel::seidel, Kernel::matmul, Kernel::jacobi2d}) {
        KernelSpec u = spec_of(k, 8);
        u.time_steps = 2;
        KernelSpec v = u;
        v.kernel = tiled_variant(k);
        v.tile = 3;
        Trace tu = generate_trace(u);
        Trace tv = generate_trace(v);
        CHECK(tu.records.size() == tv.records.size());
        CHECK(oracles::operation_multiset(tu) == oracles::operation_multiset(tv));
    }
}

TEST_CASE("oddeven_sort emits one record per CompareSwap, any dataset") {
    KernelSpec s = spec_of(Kernel::oddeven_sort, 8);
    Trace random_t = generate_trace(s);
    s.dataset = Dataset::reverse_sorted;
    s.seed = 7;
    Trace reverse_t = generate_trace(s);
    // 4 passes of 3 odd-phase and 4 even-phase comparators
    CHECK(random_t.records.size() == 4 * (3 + 4));
    CHECK(random_t == reverse_t);
    for (const auto& r : random_t.records) {
        CHECK(r.reads.size() == 2);
        CHECK(r.write == r.reads[0]);
        CHECK(r.flops == 1);
    }
}

TEST_CASE("lu pivot schedule follows the dataset") {
    auto swap_steps = [](const KernelSpec& s) {
        Trace t = generate_trace(s);
        Addr tmp_addr = s.n * s.n + 1;  // scalar after pmax in the address layout
        std::uint64_t tmp_writes = 0;
        for (const auto& r : t.records)
            if (r.write == tmp_addr) ++tmp_writes;
        return tmp_writes / s.n;  // one tmp write per swapped column element
    };
    KernelSpec s = spec_of(Kernel::lu_nonblocked, 8);
    s.dataset = Dataset::pivot_all;
    CHECK(swap_steps(s) == 7);  // pivot differs from k at every step but the last
    s.dataset = Dataset::pivot_half;
    CHECK(swap_steps(s) == 4);  // anti-diagonal input: swaps in the first n/2 steps
}

TEST_CASE("lu trace is deterministic per seed") {
    KernelSpec s = spec_of(Kernel::lu_nonblocked, 10);
    s.seed = 42;
    CHECK(generate_trace(s) == generate_trace(s));
    CHECK(generate_trace(s).records.size() >= s.n * s.n);
}

TEST_CASE("householder accumulator resets read nothing") {
    Trace t = generate_trace(spec_of(Kernel::householder, 4));
    bool saw_empty = false;
    for (const auto& r : t.records) saw_empty |= r.reads.empty();
    CHECK(saw_empty);
}

TEST_CASE("generate_trace rejects bad specs") {
    KernelSpec s = spec_of(Kernel::matmul_tiled, 4);
    s.tile = 5;
    CHECK_THROWS_AS(generate_trace(s), std::invalid_argument);
    CHECK_THROWS_AS(kernel_from_name("quicksort"), std::invalid_argument);
    KernelSpec lu = spec_of(Kernel::lu_nonblocked, 4);
    lu.dataset = Dataset::reverse_sorted;
    CHECK_THROWS_AS(generate_trace(lu), std::invalid_argument);
}

TEST_CASE("trace file round-trips") {
    SUBCASE("empty trace") {
        Trace empty;
        std::stringstream ss;
        write_trace(empty, ss);
        CHECK(ss.str() == "locpot-trace v1 word_bytes=8\n");
        CHECK(read_trace(ss) == empty);
    }
    SUBCASE("one record, byte-identical") {
        Trace t;
        t.records.push_back({0, {3, 5}, 9, 2});
        std::stringstream ss;
        write_trace(t, ss);
        std::string first = ss.str();
        Trace back = read_trace(ss);
        CHECK(back == t);
        std::stringstream ss2;
        write_trace(back, ss2);
        CHECK(ss2.str() == first);
    }
    SUBCASE("seidel n=6") {
        Trace t = generate_trace(spec_of(Kernel::seidel, 6));
        std::stringstream ss;
        write_trace(t, ss);
        Trace back = read_trace(ss);
        CHECK(back.records.size() == 16);
        CHECK(back == t);
    }
    SUBCASE("empty read list") {
        Trace t;
        t.records.push_back({0, {}, 4, 0});
        std::stringstream ss;
        write_trace(t, ss);
        CHECK(read_trace(ss) == t);
    }
}

TEST_CASE("trace parse errors carry line numbers") {
    auto parse = [](const std::string& text) {
        std::stringstream ss(text);
        return read_trace(ss);
    };
    CHECK_THROWS_AS(parse("bogus header\n"), TraceParseError);
    try {
        parse("locpot-trace v1 word_bytes=8\n0 f=1 r=2 w=3\n1 f=x r= w=4\n");
        FAIL("expected parse error");
    } catch (const TraceParseError& e) {
        CHECK(e.line == 3);
    }
    try {
        parse("locpot-trace v1 word_bytes=8\n5 f=1 r=2 w=3\n");
        FAIL("expected parse error");
    } catch (const TraceParseError& e) {
        CHECK(e.line == 2);  // out-of-sequence id
    }
}
