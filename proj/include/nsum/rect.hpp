#pragma once

#include <cstdint>

namespace nsum {

// Axis-aligned colony on the integer grid. Covers the cells
// [x, x + width) x [y, y + height).
struct Rect {
    std::uint32_t x = 0;
    std::uint32_t y = 0;
    std::uint32_t width = 0;
    std::uint32_t height = 0;

    std::uint64_t area() const { return std::uint64_t{width} * height; }

    bool contains(std::uint32_t cx, std::uint32_t cy) const {
        return cx >= x && cx < x + width && cy >= y && cy < y + height;
    }

    // Colony placement rule: lower corner at >= 1, far edge at <= world_dim.
    bool inside(std::uint32_t world_dim) const {
        return x >= 1 && y >= 1 && width >= 1 && height >= 1 &&
               std::uint64_t{x} + width <= world_dim && std::uint64_t{y} + height <= world_dim;
    }

    friend bool operator==(const Rect&, const Rect&) = default;
};

}  // namespace nsum
