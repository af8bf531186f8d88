#pragma once

#include "robound/kernels.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace robound {

struct OverlapEstimate {
    double value = 0.0;
    double stderr_ = 0.0;  // 0 for exact evaluations
};

inline constexpr std::size_t kOverlapSamples = 1'000'000;
inline constexpr std::uint64_t kOverlapSeed = 0x5eed0f0e1a9ULL;

/// Fraction of the kernel ball shared with the ball shifted by `shift`,
/// i.e. the integral of min(v(t - shift), v(t)). Exact for L^inf and n = 1,
/// Monte-Carlo otherwise.
OverlapEstimate overlap(const VicinityKernel& kernel, std::span<const double> shift,
                        std::size_t samples = kOverlapSamples, std::uint64_t seed = kOverlapSeed);

/// Closed-form L2 overlap (spherical-cap lens) used as a cross-check.
double l2_overlap_exact(std::size_t n, double eps, double distance);

struct WorstDirection {
    double overlap = 1.0;
    std::vector<double> direction;  // unit (Euclidean) vector
};

/// Minimum over unit directions of overlap(phi * direction).
WorstDirection min_direction_overlap(const VicinityKernel& kernel, double phi);

/// Largest possible change of mu_k under a shift of Euclidean length phi.
double max_mu_change(const VicinityKernel& kernel, double phi);

/// Smallest phi with max_mu_change(phi) >= 1/2 - kappa: no adversarial example
/// of a probabilistically consistent input lies closer (Euclidean distance).
double min_adv_distance(const VicinityKernel& kernel, double kappa);

/// Radius of the deterministically robust vicinity around a probabilistically
/// consistent input: half the shift separating two consistent inputs whose
/// vicinities overlap by 2 kappa, measured in the kernel's norm. L^inf shifts
/// along the diagonal; L1 / L2 along the numerically worst direction.
double solve_shrink_numeric(const VicinityKernel& kernel, double kappa);

/// Bound b with |grad mu_k . u| <= b over all classifiers and unit u:
/// 1/(2 eps) in 1-D, Euclidean diameter over area in 2-D.
double directional_derivative_bound(const VicinityKernel& kernel);

struct OverlapProfileRow {
    double phi = 0.0;
    double min_overlap = 1.0;
    double max_mu_change = 0.0;
    std::vector<double> direction;
};

std::vector<OverlapProfileRow> overlap_profile(const VicinityKernel& kernel,
                                               std::span<const double> phis);

/// Largest per-axis normalised shift a = phi / (2 eps) up to which the
/// diagonal is the worst L^inf direction (checked on a grid of a values).
double linf_diagonal_worst_limit(std::size_t n);

}  // namespace robound
