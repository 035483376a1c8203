#pragma once

#include <cstddef>
#include <span>
#include <thread>
#include <vector>

namespace conclab {

// Runs fn(i) for i in [0, count). Each index must write only to its own
// output slots; under that contract the result is identical for any number
// of workers.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    if (threads <= 1 || count < 2048) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    const std::size_t chunk = (count + workers - 1) / workers;
    auto run = [&fn](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
    };
    for (std::size_t w = 1; w < workers; ++w) {
        const std::size_t lo = std::min(count, w * chunk);
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo < hi) pool.emplace_back(run, lo, hi);
    }
    run(0, std::min(count, chunk));
    for (auto& t : pool) t.join();
}

namespace detail {

template <typename Fn>
double pairwise_sum_impl(Fn& value_at, std::size_t lo, std::size_t hi) {
    const std::size_t n = hi - lo;
    if (n <= 64) {
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += value_at(i);
        return acc;
    }
    const std::size_t mid = lo + n / 2;
    return pairwise_sum_impl(value_at, lo, mid) +
           pairwise_sum_impl(value_at, mid, hi);
}

} // namespace detail

// Pairwise (binary-tree) summation: the combination order depends only on
// the index range, never on thread count, and the rounding error grows like
// log(n) instead of n.
template <typename Fn>
double pairwise_sum_indexed(std::size_t count, Fn value_at) {
    if (count == 0) return 0.0;
    return detail::pairwise_sum_impl(value_at, 0, count);
}

inline double pairwise_sum(std::span<const double> values) {
    return pairwise_sum_indexed(values.size(),
                                [&](std::size_t i) { return values[i]; });
}

// Column-wise pairwise sum of a row-major (rows x dim) block.
inline std::vector<double> pairwise_sum_rows(std::span<const double> data,
                                             std::size_t rows,
                                             std::size_t dim) {
    std::vector<double> out(dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j) {
        out[j] = pairwise_sum_indexed(
            rows, [&](std::size_t i) { return data[i * dim + j]; });
    }
    return out;
}

} // namespace conclab
