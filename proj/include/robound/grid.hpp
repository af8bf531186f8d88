#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace robound {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    double width() const { return hi - lo; }
    bool operator==(const Interval&) const = default;
};

/// Rectangular cell-centred grid over an axis-aligned box. Cells are stored
/// row-major: the last dimension varies fastest.
class GridGeometry {
public:
    GridGeometry() = default;
    GridGeometry(std::vector<Interval> domain, std::vector<std::size_t> shape);

    std::size_t dim() const { return shape_.size(); }
    std::size_t num_cells() const { return num_cells_; }
    const std::vector<Interval>& domain() const { return domain_; }
    const std::vector<std::size_t>& shape() const { return shape_; }
    const std::vector<double>& cell_sizes() const { return cell_sizes_; }
    double cell_size(std::size_t axis) const { return cell_sizes_[axis]; }
    double cell_volume() const { return cell_volume_; }
    const std::vector<std::size_t>& strides() const { return strides_; }

    std::size_t flat_index(std::span<const std::size_t> multi) const;
    std::vector<std::size_t> multi_index(std::size_t flat) const;

    std::vector<double> center(std::size_t flat) const;
    double center_coord(std::size_t axis, std::size_t i) const;

    /// Cell containing the point; coordinates outside the domain are clamped
    /// to the nearest cell.
    std::size_t locate(std::span<const double> point) const;

    /// Grid grown by pad[i] cells on both sides of every axis; cell centres
    /// of the original grid are preserved.
    GridGeometry padded(std::span<const std::size_t> pad) const;

    bool operator==(const GridGeometry& other) const;

private:
    std::vector<Interval> domain_;
    std::vector<std::size_t> shape_;
    std::vector<double> cell_sizes_;
    std::vector<std::size_t> strides_;
    std::size_t num_cells_ = 0;
    double cell_volume_ = 0.0;
};

}  // namespace robound
