#pragma once

#include "robound/rng.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace robound {

enum class Norm { L1, L2, Linf };

Norm parse_norm(const std::string& text);
std::string to_string(Norm p);
double norm_value(std::span<const double> v, Norm p);

/// Uniform density on the closed L^p ball of radius `eps` in `dim` dimensions.
struct VicinityKernel {
    Norm p = Norm::Linf;
    double eps = 0.0;
    std::size_t dim = 1;

    bool contains(std::span<const double> delta) const;
};

VicinityKernel make_kernel(Norm p, double eps, std::size_t dim);

/// (2 eps Gamma(1+1/p))^n / Gamma(1+n/p); (2 eps)^n for p = inf.
double kernel_volume(Norm p, std::size_t n, double eps);
double kernel_volume(const VicinityKernel& kernel);
double kernel_pdf(const VicinityKernel& kernel, std::span<const double> delta);

/// Discrete kernel: weight of each integer cell offset. For L^inf the weights
/// factor into one 1-D profile per axis and `axis_weights` is populated.
struct Stencil {
    std::size_t dim = 0;
    std::vector<int> radius;               // max |offset| per axis
    std::vector<int> offsets;              // dim entries per stencil point
    std::vector<double> weights;
    std::vector<std::vector<double>> axis_weights;  // index o + radius[i]

    std::size_t size() const { return weights.size(); }
    bool separable() const { return !axis_weights.empty(); }
    std::span<const int> offset(std::size_t j) const {
        return {offsets.data() + j * dim, dim};
    }
};

enum class ResolutionCheck { Enforce, Relaxed };

/// Minimum kernel radius in cells accepted by ResolutionCheck::Enforce.
inline constexpr double kMinCellsPerRadius = 5.0;

/// Kernel mass per grid cell for a kernel centred on a cell centre. Exact
/// box intersection for L^inf, 4^n-point sub-cell supersampling otherwise.
/// Throws ResolutionTooCoarse when a cell is wider than eps/5 unless relaxed.
Stencil discretize_stencil(const VicinityKernel& kernel, std::span<const double> cell_sizes,
                           ResolutionCheck check = ResolutionCheck::Enforce);

/// Same as discretize_stencil but with the kernel centred at `shift` from
/// the centre of the reference cell (|shift_i| <= cell_i / 2 expected).
Stencil kernel_cell_weights(const VicinityKernel& kernel, std::span<const double> cell_sizes,
                            std::span<const double> shift);

/// Offset drawn uniformly from the kernel's ball.
std::vector<double> sample_offset(const VicinityKernel& kernel, Rng& rng);

/// L^inf kernel with radius eps (1 - (2 kappa)^(1/n)).
VicinityKernel shrink_kernel(const VicinityKernel& kernel, double kappa);

}  // namespace robound
