#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace conclab {

// Dense row-major point cloud: `rows` points with `cols` coordinates each.
struct RowMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    RowMatrix() = default;
    RowMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    std::span<double> row(std::size_t i) {
        return std::span<double>(data.data() + i * cols, cols);
    }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(data.data() + i * cols, cols);
    }

    bool operator==(const RowMatrix&) const = default;
};

} // namespace conclab
