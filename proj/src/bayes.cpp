#include "robound/bayes.hpp"

#include "robound/convolution.hpp"
#include "robound/error.hpp"
#include "robound/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace robound {

namespace {

std::vector<std::size_t> padding_for(const VicinityKernel& kernel, const GridGeometry& geometry,
                                     const Stencil& stencil) {
    std::vector<std::size_t> pad(geometry.dim());
    for (std::size_t i = 0; i < pad.size(); ++i) {
        const double cells = std::ceil(kernel.eps / geometry.cell_size(i) * (1.0 - 1e-12));
        pad[i] = std::max(static_cast<std::size_t>(cells), static_cast<std::size_t>(stencil.radius[i]));
    }
    return pad;
}

void check_dims(const GridDistribution& dist, const VicinityKernel& kernel) {
    if (dist.geometry().dim() != kernel.dim) {
        std::ostringstream os;
        os << "kernel dimension " << kernel.dim << " does not match distribution dimension "
           << dist.geometry().dim();
        throw Error(ErrorCode::InvalidArgument, os.str());
    }
}

struct AxisPiece {
    double length;  // fraction of the cell width
    double mid;     // offset of the piece midpoint from the cell centre, cell units
};

// Pieces of [-1/2, 1/2] (cell units) on which the set of cells touched by a
// box of half-width r around the point stays constant.
std::vector<AxisPiece> axis_pieces(double r) {
    std::vector<double> cuts{-0.5, 0.5};
    const double up = std::ceil(r);
    for (double m = up - 1.0; m <= up + 1.0; m += 1.0) {
        const double b = m - r - 0.5;
        if (b > -0.5 && b < 0.5) cuts.push_back(b);
        if (-b > -0.5 && -b < 0.5) cuts.push_back(-b);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<AxisPiece> pieces;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double len = cuts[i + 1] - cuts[i];
        if (len > 0.0) pieces.push_back({len, 0.5 * (cuts[i] + cuts[i + 1])});
    }
    return pieces;
}

bool impure(const std::vector<std::vector<double>>& dagger, std::size_t cell, double tau) {
    double marg = 0.0;
    double best = 0.0;
    for (const auto& d : dagger) {
        marg += d[cell];
        best = std::max(best, d[cell]);
    }
    return marg > 0.0 && best / marg < 1.0 - tau;
}

// Box kernels: the K share of each cell, testing D-dagger at the midpoint of
// every sub-box on which the reachable cell set is constant.
void resolve_box_fractions(BoundaryMask& mask, const GridDistribution& hard, const VicinityKernel& kernel,
                           double tau) {
    const auto& geom = hard.geometry();
    const std::size_t n = geom.dim();
    std::vector<std::vector<AxisPiece>> pieces(n);
    std::size_t combos = 1;
    for (std::size_t i = 0; i < n; ++i) {
        pieces[i] = axis_pieces(kernel.eps / geom.cell_size(i));
        combos *= pieces[i].size();
    }
    if (combos == 1) return;

    std::fill(mask.fraction.begin(), mask.fraction.end(), 0.0);
    const std::vector<std::size_t> no_pad(n, 0);
    std::vector<std::size_t> pick(n, 0);
    std::vector<double> shift(n);
    for (std::size_t combo = 0; combo < combos; ++combo) {
        double vol = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            vol *= pieces[i][pick[i]].length;
            shift[i] = pieces[i][pick[i]].mid * geom.cell_size(i);
        }
        const Stencil st = kernel_cell_weights(kernel, geom.cell_sizes(), shift);
        std::vector<std::vector<double>> dagger;
        dagger.reserve(hard.num_classes());
        for (const auto& d : hard.class_densities()) {
            dagger.push_back(convolve_field(d, geom, st, no_pad, Boundary::Zero));
        }
        for (std::size_t cell = 0; cell < geom.num_cells(); ++cell) {
            if (impure(dagger, cell, tau)) mask.fraction[cell] += vol;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (++pick[i] < pieces[i].size()) break;
            pick[i] = 0;
        }
    }
    for (double& f : mask.fraction) f = std::min(1.0, f);
}

}  // namespace

std::size_t BoundaryMask::count() const {
    return static_cast<std::size_t>(std::count(in_boundary.begin(), in_boundary.end(), true));
}

GridDistribution convolve(const GridDistribution& dist, const VicinityKernel& kernel, ResolutionCheck check) {
    check_dims(dist, kernel);
    const auto& geom = dist.geometry();
    const Stencil stencil = discretize_stencil(kernel, geom.cell_sizes(), check);
    const auto pad = padding_for(kernel, geom, stencil);
    std::vector<std::vector<double>> out;
    out.reserve(dist.num_classes());
    for (const auto& d : dist.class_densities()) {
        out.push_back(convolve_field(d, geom, stencil, pad, Boundary::Zero));
    }
    return GridDistribution(geom.padded(pad), std::move(out));
}

GridDistribution harden(const GridDistribution& dist) {
    const std::size_t k = dist.num_classes();
    std::vector<std::vector<double>> out(k, std::vector<double>(dist.num_cells(), 0.0));
    for (std::size_t cell = 0; cell < dist.num_cells(); ++cell) {
        out[dist.argmax_class(cell)][cell] = dist.marginal(cell);
    }
    return GridDistribution(dist.geometry(), std::move(out));
}

BoundaryMask boundary_region(const GridDistribution& convolved, const VicinityKernel& kernel, double tau,
                             ResolutionCheck check) {
    check_dims(convolved, kernel);
    const auto& geom = convolved.geometry();
    const Stencil stencil = discretize_stencil(kernel, geom.cell_sizes(), check);
    const GridDistribution hard = harden(convolved);
    const std::vector<std::size_t> no_pad(geom.dim(), 0);

    std::vector<std::vector<double>> dagger;
    dagger.reserve(hard.num_classes());
    for (const auto& d : hard.class_densities()) {
        dagger.push_back(convolve_field(d, geom, stencil, no_pad, Boundary::Zero));
    }

    BoundaryMask mask{geom, std::vector<bool>(geom.num_cells(), false), std::vector<double>(geom.num_cells(), 0.0)};
    for (std::size_t cell = 0; cell < geom.num_cells(); ++cell) {
        if (impure(dagger, cell, tau)) {
            mask.in_boundary[cell] = true;
            mask.fraction[cell] = 1.0;
        }
    }
    if (stencil.separable()) resolve_box_fractions(mask, hard, kernel, tau);
    return mask;
}

double bayes_error(const GridDistribution& dist) {
    double err = 0.0;
    for (std::size_t cell = 0; cell < dist.num_cells(); ++cell) {
        err += dist.marginal(cell) - dist.density(dist.argmax_class(cell), cell);
    }
    return err * dist.cell_volume();
}

double det_robust_bayes_error(const GridDistribution& dist, const VicinityKernel& kernel, double tau,
                              ResolutionCheck check) {
    const GridDistribution smoothed = convolve(dist, kernel, check);
    const BoundaryMask mask = boundary_region(smoothed, kernel, tau, check);
    double err = 0.0;
    for (std::size_t cell = 0; cell < smoothed.num_cells(); ++cell) {
        const double marg = smoothed.marginal(cell);
        const double f = mask.fraction[cell];
        err += f * marg + (1.0 - f) * (marg - smoothed.density(smoothed.argmax_class(cell), cell));
    }
    return err * smoothed.cell_volume();
}

double shrunk_radius(const VicinityKernel& kernel, double kappa) {
    check_kappa(kappa);
    if (kernel.p == Norm::Linf || kernel.dim == 1) {
        VicinityKernel as_box = kernel;
        as_box.p = Norm::Linf;
        return shrink_kernel(as_box, kappa).eps;
    }
    return solve_shrink_numeric(kernel, kappa);
}

namespace {

BoundsEntry bound_entry(const GridDistribution& dist, const VicinityKernel& kernel, double kappa, double tau,
                        std::optional<double> shrunk_eps, double b_a, double b_d) {
    check_kappa(kappa);
    BoundsEntry e;
    e.kappa = kappa;
    e.eps = kernel.eps;
    e.p = kernel.p;
    e.tau = tau;
    e.bayes_error = b_a;
    e.det_error = b_d;
    e.shrunk_eps = shrunk_eps ? *shrunk_eps : shrunk_radius(kernel, kappa);
    if (e.shrunk_eps <= 0.0) {
        e.prob_error = b_a;
    } else if (kappa == 0.0 && e.shrunk_eps == kernel.eps) {
        e.prob_error = b_d;
    } else {
        VicinityKernel shrunk = kernel;
        shrunk.eps = e.shrunk_eps;
        // the shrunken radius may legitimately drop below the grid's resolution floor
        e.prob_error = det_robust_bayes_error(dist, shrunk, tau, ResolutionCheck::Relaxed);
    }
    return e;
}

}  // namespace

BoundsEntry prob_robust_upper_bound(const GridDistribution& dist, const VicinityKernel& kernel, double kappa,
                                    double tau, std::optional<double> shrunk_eps) {
    check_kappa(kappa);
    check_dims(dist, kernel);
    const double b_a = bayes_error(dist);
    const double b_d = det_robust_bayes_error(dist, kernel, tau);
    return bound_entry(dist, kernel, kappa, tau, shrunk_eps, b_a, b_d);
}

BoundsReport kappa_sweep(const GridDistribution& dist, const VicinityKernel& kernel,
                         const std::vector<double>& kappas, double tau) {
    check_dims(dist, kernel);
    for (double k : kappas) check_kappa(k);
    if (!std::is_sorted(kappas.begin(), kappas.end())) {
        throw Error(ErrorCode::InvalidArgument, "kappa values must be ascending");
    }
    const double b_a = bayes_error(dist);
    const double b_d = det_robust_bayes_error(dist, kernel, tau);

    BoundsReport report{dist.geometry(), {}};
    report.entries.reserve(kappas.size());
    for (double kappa : kappas) {
        BoundsEntry e = bound_entry(dist, kernel, kappa, tau, std::nullopt, b_a, b_d);
        if (e.prob_error < b_a - kOrderingSlack || e.prob_error > b_d + kOrderingSlack) {
            std::ostringstream os;
            os.precision(10);
            os << "ordering b_a <= b_p <= b_d violated at kappa=" << kappa << ": b_a=" << b_a
               << " b_p=" << e.prob_error << " b_d=" << b_d;
            throw MonotonicityViolationError(kappa, kappa, os.str());
        }
        if (!report.entries.empty()) {
            const BoundsEntry& prev = report.entries.back();
            if (e.prob_error > prev.prob_error + kOrderingSlack) {
                std::ostringstream os;
                os.precision(10);
                os << "accuracy bound decreases between kappa=" << prev.kappa << " (" << prev.prob_acc_bound()
                   << ") and kappa=" << kappa << " (" << e.prob_acc_bound() << ")";
                throw MonotonicityViolationError(prev.kappa, kappa, os.str());
            }
        }
        report.entries.push_back(e);
    }
    return report;
}

}  // namespace robound
