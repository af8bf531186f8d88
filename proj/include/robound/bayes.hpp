#pragma once

#include "robound/distributions.hpp"
#include "robound/kernels.hpp"

#include <optional>
#include <vector>

namespace robound {

/// Default posterior slack for boundary-region membership.
inline constexpr double kDefaultBoundaryTolerance = 1e-6;

struct BoundaryMask {
    GridGeometry geometry;
    std::vector<bool> in_boundary;
    // Share of each cell's volume lying in K. Box kernels resolve this below
    // the cell: the vicinity of a point reaches a fixed set of cells on each
    // of at most 3^n sub-boxes. Other kernels use whole cells (0 or 1).
    std::vector<double> fraction;

    std::size_t count() const;
};

/// Each class density convolved with the kernel stencil; the output grid is
/// padded by ceil(eps / cell) cells per side and mass is preserved.
GridDistribution convolve(const GridDistribution& dist, const VicinityKernel& kernel,
                          ResolutionCheck check = ResolutionCheck::Enforce);

/// All marginal mass of a cell moves to its argmax class (lowest index on ties).
GridDistribution harden(const GridDistribution& dist);

/// Cells of `convolved` whose hardened-then-convolved posterior has max below
/// 1 - tau. Cells with zero marginal are never in the region.
BoundaryMask boundary_region(const GridDistribution& convolved, const VicinityKernel& kernel,
                             double tau = kDefaultBoundaryTolerance,
                             ResolutionCheck check = ResolutionCheck::Enforce);

double bayes_error(const GridDistribution& dist);

double det_robust_bayes_error(const GridDistribution& dist, const VicinityKernel& kernel,
                              double tau = kDefaultBoundaryTolerance,
                              ResolutionCheck check = ResolutionCheck::Enforce);

struct BoundsEntry {
    double kappa = 0.0;
    double eps = 0.0;
    double shrunk_eps = 0.0;
    Norm p = Norm::Linf;
    double tau = kDefaultBoundaryTolerance;
    double bayes_error = 0.0;      // b_a
    double det_error = 0.0;        // b_d
    double prob_error = 0.0;       // b_p(kappa)

    double vanilla_acc_bound() const { return 1.0 - bayes_error; }
    double det_acc_bound() const { return 1.0 - det_error; }
    double prob_acc_bound() const { return 1.0 - prob_error; }
};

struct BoundsReport {
    GridGeometry geometry;
    std::vector<BoundsEntry> entries;
};

/// Radius of the deterministically robust vicinity for tolerance kappa:
/// closed form for L^inf, numeric overlap solve for L1 / L2.
double shrunk_radius(const VicinityKernel& kernel, double kappa);

/// b_p(kappa) = deterministic robust Bayes error under the shrunken kernel.
/// `shrunk_eps` overrides the radius computed by shrunk_radius().
BoundsEntry prob_robust_upper_bound(const GridDistribution& dist, const VicinityKernel& kernel,
                                    double kappa, double tau = kDefaultBoundaryTolerance,
                                    std::optional<double> shrunk_eps = std::nullopt);

/// Bounds for ascending kappas. Throws MonotonicityViolation if the accuracy
/// bound decreases or the b_a <= b_p <= b_d ordering breaks.
BoundsReport kappa_sweep(const GridDistribution& dist, const VicinityKernel& kernel,
                         const std::vector<double>& kappas,
                         double tau = kDefaultBoundaryTolerance);

/// Absolute slack for floating-point noise in ordering checks.
inline constexpr double kOrderingSlack = 1e-12;

}  // namespace robound
