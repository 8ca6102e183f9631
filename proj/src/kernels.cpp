#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <initializer_list>
#include <random>

#include "locpot/trace.hpp"

namespace locpot {

namespace {

// Hands out disjoint address ranges: one word per scalar, a row-major block
// per 2D array.
class AddressSpace {
public:
    Addr scalar() { return next_++; }

    struct Array2 {
        Addr base = 0;
        std::uint64_t cols = 0;
        Addr operator()(std::uint64_t i, std::uint64_t j) const { return base + i * cols + j; }
    };

    Array2 array(std::uint64_t rows, std::uint64_t cols) {
        Array2 a{next_, cols};
        next_ += rows * cols;
        return a;
    }

    Addr word(std::uint64_t count = 1) {
        Addr base = next_;
        next_ += count;
        return base;
    }

private:
    Addr next_ = 0;
};

class TraceBuilder {
public:
    // Reads are deduplicated per record, keeping first-use order.
    void emit(std::initializer_list<Addr> reads, Addr write, std::uint32_t flops) {
        TraceRecord rec;
        rec.id = trace_.records.size();
        for (Addr a : reads)
            if (std::find(rec.reads.begin(), rec.reads.end(), a) == rec.reads.end())
                rec.reads.push_back(a);
        rec.write = write;
        rec.flops = flops;
        trace_.records.push_back(std::move(rec));
    }

    Trace take() { return std::move(trace_); }

private:
    Trace trace_;
};

std::uint64_t default_tile(const KernelSpec& spec) {
    if (spec.tile != 0) return spec.tile;
    return std::min<std::uint64_t>(4, spec.n);
}

void validate(const KernelSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("kernel size n must be >= 1");
    std::uint64_t tile = default_tile(spec);
    if (tile < 1) throw std::invalid_argument("tile must be >= 1");
    if (tile > spec.n) throw std::invalid_argument("tile must be <= n");
}

// A[i][j] = A[i-1][j] + A[i][j-1] over the interior of an n x n grid.
Trace gen_seidel(const KernelSpec& spec) {
    AddressSpace mem;
    TraceBuilder tb;
    auto A = mem.array(spec.n, spec.n);
    for (std::uint64_t i = 1; i + 1 < spec.n; ++i)
        for (std::uint64_t j = 1; j + 1 < spec.n; ++j)
            tb.emit({A(i - 1, j), A(i, j - 1)}, A(i, j), 1);
    return tb.take();
}

Trace gen_seidel_tiled(const KernelSpec& spec) {
    AddressSpace mem;
    TraceBuilder tb;
    auto A = mem.array(spec.n, spec.n);
    std::uint64_t b = default_tile(spec);
    for (std::uint64_t it = 1; it + 1 < spec.n; it += b)
        for (std::uint64_t jt = 1; jt + 1 < spec.n; jt += b)
            for (std::uint64_t i = it; i < std::min(it + b, spec.n - 1); ++i)
                for (std::uint64_t j = jt; j < std::min(jt + b, spec.n - 1); ++j)
                    tb.emit({A(i - 1, j), A(i, j - 1)}, A(i, j), 1);
    return tb.take();
}

// Ping-pong five-point stencil: even half-sweeps write B from A, odd ones
// write A from B. time_steps full steps = 2 * time_steps half-sweeps.
struct JacobiEmitter {
    AddressSpace::Array2 A, B;
    TraceBuilder* tb;

    void point(std::uint64_t tau, std::uint64_t i, std::uint64_t j) const {
        const auto& src = (tau % 2 == 0) ? A : B;
        const auto& dst = (tau % 2 == 0) ? B : A;
        tb->emit({src(i, j), src(i, j - 1), src(i, j + 1), src(i + 1, j), src(i - 1, j)},
                 dst(i, j), 5);
    }
};

Trace gen_jacobi2d(const KernelSpec& spec) {
    AddressSpace mem;
    TraceBuilder tb;
    std::uint64_t steps = spec.time_steps ? spec.time_steps : 1;
    JacobiEmitter em{mem.array(spec.n, spec.n), mem.array(spec.n, spec.n), &tb};
    for (std::uint64_t tau = 0; tau < 2 * steps; ++tau)
        for (std::uint64_t i = 1; i + 1 < spec.n; ++i)
            for (std::uint64_t j = 1; j + 1 < spec.n; ++j)
                em.point(tau, i, j);
    return tb.take();
}

// Time-skewed tiling: with i' = i + tau and j' = j + tau all dependence
// vectors become non-negative, so lexicographic rectangular tiles of
// (tau, i', j') preserve every dependence.
Trace gen_jacobi2d_tiled(const KernelSpec& spec) {
    AddressSpace mem;
    TraceBuilder tb;
    std::uint64_t steps = spec.time_steps ? spec.time_steps : 1;
    std::uint64_t b = default_tile(spec);
    JacobiEmitter em{mem.array(spec.n, spec.n), mem.array(spec.n, spec.n), &tb};
    std::uint64_t tmax = 2 * steps;
    std::uint64_t skew_max = spec.n - 2 + (tmax - 1);  // max of i + tau
    for (std::uint64_t tt = 0; tt < tmax; tt += b)
        for (std::uint64_t it = 1; it <= skew_max; it += b)
            for (std::uint64_t jt = 1; jt <= skew_max; jt += b)
                for (std::uint64_t tau = tt; tau < std::min(tt + b, tmax); ++tau)
                    for (std::uint64_t is = it; is < std::min(it + b, skew_max + 1); ++is)
                        for (std::uint64_t js = jt; js < std::min(jt + b, skew_max + 1); ++js) {
                            if (is < tau + 1 || js < tau + 1) continue;
                            std::uint64_t i = is - tau, j = js - tau;
                            if (i + 1 >= spec.n || j + 1 >= spec.n) continue;
                            em.point(tau, i, j);
                        }
    return tb.take();
}

// C[i][j] += A[i][k] * B[k][j]; C starts as program input.
Trace gen_matmul(const KernelSpec& spec) {
    AddressSpace mem;
    TraceBuilder tb;
    auto A = mem.array(spec.n, spec.n);
    auto B = mem.array(spec.n, spec.n);
    auto C = mem.array(spec.n, spec.n);
    for (std::uint64_t i = 0; i < spec.n; ++i)
        for (std::uint64_t j = 0; j < spec.n; ++j)
            for (std::uint64_t k = 0; k < spec.n; ++k)
                tb.emit({C(i, j), A(i, k), B(k, j)}, C(i, j), 2);
    return tb.take();
}

Trace gen_matmul_tiled(const KernelSpec& spec) {
    AddressSpace mem;
    TraceBuilder tb;
    auto A = mem.array(spec.n, spec.n);
    auto B = mem.array(spec.n, spec.n);
    auto C = mem.array(spec.n, spec.n);
    std::uint64_t b = default_tile(spec);
    for (std::uint64_t it = 0; it < spec.n; it += b)
        for (std::uint64_t jt = 0; jt < spec.n; jt += b)
            for (std::uint64_t kt = 0; kt < spec.n; kt += b)
                for (std::uint64_t i = it; i < std::min(it + b, spec.n); ++i)
                    for (std::uint64_t j = jt; j < std::min(jt + b, spec.n); ++j)
                        for (std::uint64_t k = kt; k < std::min(kt + b, spec.n); ++k)
                            tb.emit({C(i, j), A(i, k), B(k, j)}, C(i, j), 2);
    return tb.take();
}

// Out-of-place all-pairs shortest path: the k loop advances by two per
// iteration, alternating temp <- f(A) at k and A <- f(temp) at k+1.
Trace gen_floyd_warshall(const KernelSpec& spec) {
    AddressSpace mem;
    TraceBuilder tb;
    std::uint64_t n = spec.n;
    auto A = mem.array(n, n);
    auto temp = mem.array(n, n);
    for (std::uint64_t k = 0; k < n; ++k) {
        for (std::uint64_t i = 0; i < n; ++i)
            for (std::uint64_t j = 0; j < n; ++j)
                tb.emit({A(i, j), A(i, k), A(k, j)}, temp(i, j), 2);
        ++k;
        if (k >= n) break;
        for (std::uint64_t i = 0; i < n; ++i)
            for (std::uint64_t j = 0; j < n; ++j)
                tb.emit({temp(i, j), temp(i, k), temp(k, j)}, A(i, j), 2);
    }
    return tb.take();
}

// QR by plane rotations over an m x n matrix. One record per assigned value:
// c, s, then t1/t2 and the two row updates per column element.
Trace gen_givens(const KernelSpec& spec) {
    AddressSpace mem;
    TraceBuilder tb;
    std::uint64_t n = spec.n;
    std::uint64_t m = spec.m ? spec.m : n;
    if (m < 2) throw std::invalid_argument("givens needs m >= 2");
    auto A = mem.array(m, n);
    Addr c = mem.scalar(), s = mem.scalar(), t1 = mem.scalar(), t2 = mem.scalar();
    for (std::uint64_t j = 0; j < n; ++j) {
        for (std::int64_t i = static_cast<std::int64_t>(m) - 2; i >= static_cast<std::int64_t>(j); --i) {
            std::uint64_t iu = static_cast<std::uint64_t>(i);
            tb.emit({A(iu, j), A(iu + 1, j)}, c, 5);
            tb.emit({A(iu + 1, j), A(iu, j)}, s, 6);
            for (std::uint64_t k = j; k < n; ++k) {
                tb.emit({c, A(iu, k), s, A(iu + 1, k)}, t1, 3);
                tb.emit({s, A(iu, k), c, A(iu + 1, k)}, t2, 3);
                tb.emit({t1}, A(iu, k), 0);
                tb.emit({t2}, A(iu + 1, k), 0);
            }
        }
    }
    return tb.take();
}

// QR by reflections over an m x n matrix. Accumulator resets (total = 0,
// dot = 0) are records with no reads; the sign-dependent negation of norm_x
// is always emitted so the trace stays a function of the sizes alone.
Trace gen_householder(const KernelSpec& spec) {
    AddressSpace mem;
    TraceBuilder tb;
    std::uint64_t n = spec.n;
    std::uint64_t m = spec.m ? spec.m : n;
    if (m < 2) throw std::invalid_argument("householder needs m >= 2");
    auto A = mem.array(m, n);
    Addr v = mem.word(m);
    Addr total = mem.scalar(), norm_x = mem.scalar(), norm_v = mem.scalar(), dot = mem.scalar();
    for (std::uint64_t j = 0; j < n && j < m; ++j) {
        tb.emit({}, total, 0);
        for (std::uint64_t i = j + 1; i < m; ++i) tb.emit({total, A(i, j)}, total, 2);
        tb.emit({A(j, j), total}, norm_x, 2);
        tb.emit({norm_x}, norm_x, 1);
        tb.emit({norm_x, A(j, j)}, v + j, 1);
        tb.emit({v + j, total}, norm_v, 2);
        tb.emit({v + j, norm_v}, v + j, 1);
        for (std::uint64_t i = j + 1; i < m; ++i) tb.emit({A(i, j), norm_v}, v + i, 1);
        for (std::uint64_t jj = j; jj < n; ++jj) {
            tb.emit({}, dot, 0);
            for (std::uint64_t kk = j; kk < m; ++kk) tb.emit({dot, v + kk, A(kk, jj)}, dot, 2);
            for (std::uint64_t ii = j; ii < m; ++ii) tb.emit({A(ii, jj), v + ii, dot}, A(ii, jj), 3);
        }
    }
    return tb.take();
}

// Odd-even transposition sort over a linked list of n payload words. Every
// CompareSwap is one record regardless of the swap outcome; it reads both
// payloads and writes the first, so the trace does not depend on the values.
Trace gen_oddeven_sort(const KernelSpec& spec) {
    if (spec.dataset == Dataset::pivot_half || spec.dataset == Dataset::pivot_all)
        throw std::invalid_argument("oddeven_sort supports datasets random and reverse_sorted");
    AddressSpace mem;
    TraceBuilder tb;
    std::uint64_t n = spec.n;
    Addr payload = mem.word(n);
    for (std::uint64_t pass = 0; pass < n / 2; ++pass) {
        for (std::uint64_t i = 1; i + 1 < n; i += 2)
            tb.emit({payload + i, payload + i + 1}, payload + i, 1);
        for (std::uint64_t i = 0; i + 1 < n; i += 2)
            tb.emit({payload + i, payload + i + 1}, payload + i, 1);
    }
    return tb.take();
}

// Right-looking LU with partial pivoting (unblocked). Emits the pivot-search
// scan chained through a running-max scalar, element swaps via a temp word,
// then the scale and rank-1 update records. Pivot choices follow simulated
// element values, which the dataset determines.
Trace gen_lu_nonblocked(const KernelSpec& spec) {
    if (spec.dataset == Dataset::reverse_sorted)
        throw std::invalid_argument("lu_nonblocked supports datasets random, pivot_half, pivot_all");
    AddressSpace mem;
    TraceBuilder tb;
    std::uint64_t n = spec.n;
    auto A = mem.array(n, n);
    Addr pmax = mem.scalar(), tmp = mem.scalar();

    std::vector<double> val(n * n, 0.0);
    auto at = [&](std::uint64_t i, std::uint64_t j) -> double& { return val[i * n + j]; };
    switch (spec.dataset) {
        case Dataset::random: {
            std::mt19937_64 rng(spec.seed);
            for (auto& x : val) x = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
            break;
        }
        case Dataset::pivot_half:
            // anti-diagonal permutation: pivots move for the first n/2 steps
            for (std::uint64_t i = 0; i < n; ++i) at(i, n - 1 - i) = 1.0;
            break;
        case Dataset::pivot_all:
            // cyclic shift: the pivot differs from k at every step but the last
            for (std::uint64_t i = 0; i < n; ++i) at(i, (i + 1) % n) = 1.0;
            break;
        case Dataset::reverse_sorted: break;  // rejected above
    }

    for (std::uint64_t k = 0; k < n; ++k) {
        tb.emit({A(k, k)}, pmax, 0);
        std::uint64_t p = k;
        for (std::uint64_t i = k + 1; i < n; ++i) {
            tb.emit({A(i, k), pmax}, pmax, 0);
            if (std::abs(at(i, k)) > std::abs(at(p, k))) p = i;
        }
        if (p != k) {
            for (std::uint64_t j = 0; j < n; ++j) {
                tb.emit({A(k, j)}, tmp, 0);
                tb.emit({A(p, j)}, A(k, j), 0);
                tb.emit({tmp}, A(p, j), 0);
                std::swap(at(k, j), at(p, j));
            }
        }
        double pivot = at(k, k);
        for (std::uint64_t i = k + 1; i < n; ++i) {
            tb.emit({A(i, k), A(k, k)}, A(i, k), 1);
            if (pivot != 0.0) at(i, k) /= pivot;
        }
        for (std::uint64_t i = k + 1; i < n; ++i)
            for (std::uint64_t j = k + 1; j < n; ++j) {
                tb.emit({A(i, j), A(i, k), A(k, j)}, A(i, j), 2);
                at(i, j) -= at(i, k) * at(k, j);
            }
    }
    return tb.take();
}

}  // namespace

Trace generate_trace(const KernelSpec& spec) {
    validate(spec);
    switch (spec.kernel) {
        case Kernel::seidel: return gen_seidel(spec);
        case Kernel::seidel_tiled: return gen_seidel_tiled(spec);
        case Kernel::jacobi2d: return gen_jacobi2d(spec);
        case Kernel::jacobi2d_tiled: return gen_jacobi2d_tiled(spec);
        case Kernel::matmul: return gen_matmul(spec);
        case Kernel::matmul_tiled: return gen_matmul_tiled(spec);
        case Kernel::floyd_warshall: return gen_floyd_warshall(spec);
        case Kernel::givens: return gen_givens(spec);
        case Kernel::householder: return gen_householder(spec);
        case Kernel::oddeven_sort: return gen_oddeven_sort(spec);
        case Kernel::lu_nonblocked: return gen_lu_nonblocked(spec);
    }
    throw std::invalid_argument("unknown kernel");
}

}  // namespace locpot
