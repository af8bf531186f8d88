#pragma once

#include "robound/grid.hpp"
#include "robound/kernels.hpp"

#include <span>
#include <vector>

namespace robound {

enum class Boundary {
    Zero,   // values outside the input grid are 0
    Clamp,  // values outside are taken from the nearest cell
};

/// out(x) = sum_o w(o) in(x - o) on a grid padded by `pad` cells per side.
std::vector<double> convolve_field(std::span<const double> field, const GridGeometry& geometry,
                                   const Stencil& stencil, std::span<const std::size_t> pad,
                                   Boundary boundary);

}  // namespace robound
