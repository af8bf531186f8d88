#include "robound/convolution.hpp"

#include "robound/error.hpp"

#include <algorithm>

namespace robound {

namespace {

/// 1-D convolution along `axis` of a row-major array with dims `shape`.
/// The axis grows by 2 * pad cells.
std::vector<double> convolve_axis(const std::vector<double>& in, std::vector<std::size_t>& shape,
                                  std::size_t axis, const std::vector<double>& w, int radius,
                                  std::size_t pad, Boundary boundary) {
    const std::size_t len = shape[axis];
    const std::size_t out_len = len + 2 * pad;
    std::size_t inner = 1;
    for (std::size_t i = axis + 1; i < shape.size(); ++i) inner *= shape[i];
    std::size_t outer = 1;
    for (std::size_t i = 0; i < axis; ++i) outer *= shape[i];

    std::vector<double> out(outer * out_len * inner, 0.0);
    const auto slen = static_cast<long>(len);
    for (std::size_t a = 0; a < outer; ++a) {
        const double* src = in.data() + a * len * inner;
        double* dst = out.data() + a * out_len * inner;
        for (std::size_t y = 0; y < out_len; ++y) {
            double* drow = dst + y * inner;
            for (int o = -radius; o <= radius; ++o) {
                const double wo = w[o + radius];
                if (wo == 0.0) continue;
                long s = static_cast<long>(y) - static_cast<long>(pad) - o;
                if (s < 0 || s >= slen) {
                    if (boundary == Boundary::Zero) continue;
                    s = std::clamp(s, 0L, slen - 1);
                }
                const double* srow = src + static_cast<std::size_t>(s) * inner;
                for (std::size_t b = 0; b < inner; ++b) drow[b] += wo * srow[b];
            }
        }
    }
    shape[axis] = out_len;
    return out;
}

}  // namespace

std::vector<double> convolve_field(std::span<const double> field, const GridGeometry& geometry,
                                   const Stencil& stencil, std::span<const std::size_t> pad,
                                   Boundary boundary) {
    const std::size_t n = geometry.dim();
    if (stencil.dim != n || pad.size() != n || field.size() != geometry.num_cells()) {
        throw Error(ErrorCode::InvalidArgument, "convolution operands have mismatched dimensions");
    }
    const auto& shape = geometry.shape();

    if (stencil.separable()) {
        std::vector<std::size_t> cur = shape;
        std::vector<double> data(field.begin(), field.end());
        for (std::size_t axis = 0; axis < n; ++axis) {
            data = convolve_axis(data, cur, axis, stencil.axis_weights[axis], stencil.radius[axis], pad[axis], boundary);
        }
        return data;
    }

    std::vector<std::size_t> out_shape(n);
    std::size_t out_cells = 1;
    for (std::size_t i = 0; i < n; ++i) {
        out_shape[i] = shape[i] + 2 * pad[i];
        out_cells *= out_shape[i];
    }
    const auto& strides = geometry.strides();
    std::vector<double> out(out_cells, 0.0);
    std::vector<long> y(n, 0);
    for (std::size_t cell = 0; cell < out_cells; ++cell) {
        double acc = 0.0;
        for (std::size_t j = 0; j < stencil.size(); ++j) {
            const auto o = stencil.offset(j);
            std::size_t flat = 0;
            bool valid = true;
            for (std::size_t i = 0; i < n; ++i) {
                const auto len = static_cast<long>(shape[i]);
                long s = y[i] - static_cast<long>(pad[i]) - o[i];
                if (s < 0 || s >= len) {
                    if (boundary == Boundary::Zero) {
                        valid = false;
                        break;
                    }
                    s = std::clamp(s, 0L, len - 1);
                }
                flat += static_cast<std::size_t>(s) * strides[i];
            }
            if (valid) acc += stencil.weights[j] * field[flat];
        }
        out[cell] = acc;
        for (std::size_t i = n; i-- > 0;) {
            if (++y[i] < static_cast<long>(out_shape[i])) break;
            y[i] = 0;
        }
    }
    return out;
}

}  // namespace robound
