#include "robound/grid.hpp"

#include "robound/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace robound {

GridGeometry::GridGeometry(std::vector<Interval> domain, std::vector<std::size_t> shape)
    : domain_(std::move(domain)), shape_(std::move(shape)) {
    if (domain_.empty() || domain_.size() != shape_.size()) {
        throw Error(ErrorCode::InvalidArgument, "grid domain and shape must be non-empty and of equal length");
    }
    const std::size_t n = shape_.size();
    cell_sizes_.resize(n);
    strides_.resize(n);
    num_cells_ = 1;
    cell_volume_ = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(domain_[i].lo < domain_[i].hi) || !std::isfinite(domain_[i].lo) || !std::isfinite(domain_[i].hi)) {
            std::ostringstream os;
            os << "grid axis " << i << " has an empty or non-finite interval";
            throw Error(ErrorCode::InvalidArgument, os.str());
        }
        if (shape_[i] < 2) {
            std::ostringstream os;
            os << "grid axis " << i << " needs at least 2 cells, got " << shape_[i];
            throw Error(ErrorCode::InvalidArgument, os.str());
        }
        cell_sizes_[i] = domain_[i].width() / static_cast<double>(shape_[i]);
        cell_volume_ *= cell_sizes_[i];
        num_cells_ *= shape_[i];
    }
    std::size_t stride = 1;
    for (std::size_t i = n; i-- > 0;) {
        strides_[i] = stride;
        stride *= shape_[i];
    }
}

std::size_t GridGeometry::flat_index(std::span<const std::size_t> multi) const {
    std::size_t flat = 0;
    for (std::size_t i = 0; i < shape_.size(); ++i) flat += multi[i] * strides_[i];
    return flat;
}

std::vector<std::size_t> GridGeometry::multi_index(std::size_t flat) const {
    std::vector<std::size_t> multi(shape_.size());
    for (std::size_t i = 0; i < shape_.size(); ++i) {
        multi[i] = flat / strides_[i];
        flat %= strides_[i];
    }
    return multi;
}

double GridGeometry::center_coord(std::size_t axis, std::size_t i) const {
    return domain_[axis].lo + (static_cast<double>(i) + 0.5) * cell_sizes_[axis];
}

std::vector<double> GridGeometry::center(std::size_t flat) const {
    std::vector<double> c(shape_.size());
    for (std::size_t i = 0; i < shape_.size(); ++i) {
        c[i] = center_coord(i, flat / strides_[i]);
        flat %= strides_[i];
    }
    return c;
}

std::size_t GridGeometry::locate(std::span<const double> point) const {
    std::size_t flat = 0;
    for (std::size_t i = 0; i < shape_.size(); ++i) {
        const double t = std::floor((point[i] - domain_[i].lo) / cell_sizes_[i]);
        const double hi = static_cast<double>(shape_[i] - 1);
        const auto idx = static_cast<std::size_t>(std::clamp(t, 0.0, hi));
        flat += idx * strides_[i];
    }
    return flat;
}

GridGeometry GridGeometry::padded(std::span<const std::size_t> pad) const {
    std::vector<Interval> dom = domain_;
    std::vector<std::size_t> shp = shape_;
    for (std::size_t i = 0; i < shape_.size(); ++i) {
        const double grow = static_cast<double>(pad[i]) * cell_sizes_[i];
        dom[i] = {domain_[i].lo - grow, domain_[i].hi + grow};
        shp[i] = shape_[i] + 2 * pad[i];
    }
    GridGeometry out(std::move(dom), std::move(shp));
    // keep the exact cell pitch of the source grid
    out.cell_sizes_ = cell_sizes_;
    out.cell_volume_ = cell_volume_;
    return out;
}

bool GridGeometry::operator==(const GridGeometry& other) const {
    return shape_ == other.shape_ && domain_ == other.domain_;
}

}  // namespace robound
