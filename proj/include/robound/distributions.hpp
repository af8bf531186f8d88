#pragma once

#include "robound/grid.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace robound {

/// Discretised joint density p(x, y=k) on a cell-centred grid.
///
/// Densities are per unit volume and evaluated at cell centres, so every
/// integral over the grid is a midpoint sum weighted by cell_volume().
/// Instances are immutable once constructed.
class GridDistribution {
public:
    GridDistribution(GridGeometry geometry, std::vector<std::vector<double>> class_densities);

    const GridGeometry& geometry() const { return geometry_; }
    std::size_t num_classes() const { return densities_.size(); }
    std::size_t num_cells() const { return geometry_.num_cells(); }
    double cell_volume() const { return geometry_.cell_volume(); }

    double density(std::size_t k, std::size_t cell) const { return densities_[k][cell]; }
    const std::vector<double>& class_density(std::size_t k) const { return densities_[k]; }
    const std::vector<std::vector<double>>& class_densities() const { return densities_; }

    double marginal(std::size_t cell) const;
    /// Argmax of the posterior; ties go to the lowest class index.
    std::size_t argmax_class(std::size_t cell) const;
    double max_posterior(std::size_t cell) const;
    double total_mass() const;

private:
    GridGeometry geometry_;
    std::vector<std::vector<double>> densities_;
};

struct Posterior {
    std::vector<double> probs;
    /// True when the marginal is zero and `probs` is the uniform fallback.
    bool zero_marginal = false;
};

Posterior posterior(const GridDistribution& dist, std::size_t cell);
double marginal(const GridDistribution& dist, std::size_t cell);

// ---------------------------------------------------------------------------
// Specifications

struct NormalComponent {
    std::vector<double> mean;
    std::vector<double> stddev;  // one entry per dimension
    double weight = 1.0;
};

struct NormalMixtureParams {
    std::vector<std::vector<NormalComponent>> classes;
};

/// Two interleaving half circles: class 0 is the upper arc of radius 1
/// around (0, 0), class 1 the lower arc of radius 1 around (1, 0.5).
struct MoonsParams {
    double noise = 0.1;
    std::size_t arc_points = 1000;
};

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;
};

/// Each class is uniform on a union of disjoint boxes.
struct UniformBoxesParams {
    std::vector<std::vector<Box>> classes;
};

struct LabeledSamples {
    std::size_t dim = 0;
    std::vector<std::vector<double>> points;
    std::vector<std::size_t> labels;
};

struct KdeParams {
    LabeledSamples samples;
    /// Per-dimension bandwidth; empty selects Scott's rule per class.
    std::vector<double> bandwidth;
};

using DistributionParams = std::variant<NormalMixtureParams, MoonsParams, UniformBoxesParams, KdeParams>;

struct DistributionSpec {
    DistributionParams params;
    std::vector<double> priors;
    std::vector<Interval> domain;
    std::vector<std::size_t> shape;

    std::string kind() const;
    std::size_t num_classes() const { return priors.size(); }
};

void validate(const DistributionSpec& spec);

/// Builds the normalised grid distribution. Throws NonFiniteDensity,
/// EmptyClass, DomainTooSmall, or InvalidArgument for malformed specs.
GridDistribution build_distribution(const DistributionSpec& spec);

/// Scott's factor n^(-1/(d+4)) times the per-dimension sample deviation.
std::vector<double> scott_bandwidth(const std::vector<std::vector<double>>& points);

/// Fraction of the analytic (pre-truncation) mass that lies outside the
/// domain, prior weighted.
double clipped_mass_fraction(const DistributionSpec& spec);

// Canonical shipped specifications.
DistributionSpec canonical_normals_spec(std::size_t cells = 2000);
DistributionSpec step_spec(std::size_t cells = 2000);
DistributionSpec moons_spec(std::size_t nx = 400, std::size_t ny = 250);

}  // namespace robound
