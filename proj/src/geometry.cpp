#include "robound/geometry.hpp"

#include "robound/error.hpp"
#include "robound/rng.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <numbers>
#include <sstream>

namespace robound {

namespace {

constexpr double kBisectionTol = 1e-9;
constexpr std::size_t kSearchSamples = 100'000;

/// Points drawn once from the kernel ball; reused across shifts so overlap
/// estimates along a fixed direction are monotone in the shift length.
class BallCloud {
public:
    BallCloud(const VicinityKernel& kernel, std::size_t samples, std::uint64_t seed)
        : kernel_(kernel), count_(samples) {
        Rng rng(seed);
        points_.reserve(samples * kernel.dim);
        for (std::size_t i = 0; i < samples; ++i) {
            const auto t = sample_offset(kernel, rng);
            points_.insert(points_.end(), t.begin(), t.end());
        }
    }

    OverlapEstimate overlap(std::span<const double> shift) const {
        const std::size_t n = kernel_.dim;
        std::vector<double> d(n);
        std::size_t hits = 0;
        for (std::size_t i = 0; i < count_; ++i) {
            for (std::size_t j = 0; j < n; ++j) d[j] = points_[i * n + j] - shift[j];
            if (norm_value(d, kernel_.p) <= kernel_.eps) ++hits;
        }
        const double v = static_cast<double>(hits) / static_cast<double>(count_);
        return {v, std::sqrt(v * (1.0 - v) / static_cast<double>(count_))};
    }

private:
    VicinityKernel kernel_;
    std::size_t count_;
    std::vector<double> points_;
};

bool exact_overlap_available(const VicinityKernel& kernel) {
    return kernel.p == Norm::Linf || kernel.dim == 1;
}

double exact_box_overlap(const VicinityKernel& kernel, std::span<const double> shift) {
    double v = 1.0;
    for (double s : shift) v *= std::max(0.0, 2.0 * kernel.eps - std::abs(s)) / (2.0 * kernel.eps);
    return v;
}

std::vector<double> scaled(std::span<const double> dir, double phi) {
    std::vector<double> s(dir.begin(), dir.end());
    for (double& v : s) v *= phi;
    return s;
}

/// Unit vector in the positive orthant from n-1 hyperspherical angles.
std::vector<double> direction_from_angles(std::span<const double> angles) {
    const std::size_t n = angles.size() + 1;
    std::vector<double> d(n);
    double sin_prod = 1.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        d[i] = sin_prod * std::cos(angles[i]);
        sin_prod *= std::sin(angles[i]);
    }
    d[n - 1] = sin_prod;
    for (double& v : d) v = std::abs(v);
    return d;
}

/// Coarse grid over the positive orthant followed by a shrinking pattern
/// search. All shipped norms are symmetric under sign flips, so the
/// positive orthant covers every direction up to symmetry.
WorstDirection search_directions(std::size_t n, const std::function<double(std::span<const double>)>& objective,
                                  std::size_t coarse_per_angle) {
    WorstDirection best;
    best.overlap = 2.0;
    auto consider = [&](std::vector<double> d) {
        const double v = objective(d);
        if (v < best.overlap) {
            best.overlap = v;
            best.direction = std::move(d);
        }
    };

    std::vector<double> diag(n, 1.0 / std::sqrt(static_cast<double>(n)));
    consider(diag);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> axis(n, 0.0);
        axis[i] = 1.0;
        consider(axis);
    }

    const std::size_t m = n - 1;
    const double half_pi = std::numbers::pi / 2.0;
    std::vector<double> angles(m, 0.0);
    std::vector<double> best_angles(m, 0.0);
    std::vector<std::size_t> idx(m, 0);
    double best_grid = 2.0;
    while (true) {
        for (std::size_t i = 0; i < m; ++i) {
            angles[i] = half_pi * static_cast<double>(idx[i]) / static_cast<double>(coarse_per_angle - 1);
        }
        const auto d = direction_from_angles(angles);
        const double v = objective(d);
        if (v < best_grid) {
            best_grid = v;
            best_angles = angles;
        }
        if (v < best.overlap) {
            best.overlap = v;
            best.direction = d;
        }
        std::size_t i = 0;
        for (; i < m; ++i) {
            if (++idx[i] < coarse_per_angle) break;
            idx[i] = 0;
        }
        if (i == m) break;
    }

    // pattern search around the best grid point
    double step = half_pi / static_cast<double>(coarse_per_angle - 1);
    std::vector<double> cur = best_angles;
    double cur_v = best_grid;
    while (step > 1e-7) {
        bool improved = false;
        for (std::size_t i = 0; i < m; ++i) {
            for (double sgn : {-1.0, 1.0}) {
                std::vector<double> trial = cur;
                trial[i] = std::clamp(trial[i] + sgn * step, 0.0, half_pi);
                const auto d = direction_from_angles(trial);
                const double v = objective(d);
                if (v < cur_v) {
                    cur_v = v;
                    cur = trial;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    if (cur_v < best.overlap) {
        best.overlap = cur_v;
        best.direction = direction_from_angles(cur);
    }
    return best;
}

std::size_t coarse_resolution(std::size_t n, bool cheap) {
    if (n == 2) return cheap ? 181 : 37;
    if (n == 3) return cheap ? 61 : 13;
    return cheap ? 13 : 5;
}

/// Smallest x in [lo, hi] with pred(x) true, assuming pred is monotone.
double bisect(double lo, double hi, const std::function<bool(double)>& pred) {
    if (pred(lo)) return lo;
    while (hi - lo > kBisectionTol) {
        const double mid = 0.5 * (lo + hi);
        if (pred(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

/// Worst-direction overlap evaluator bound to one kernel. MC kernels share a
/// single point cloud so that repeated evaluations are consistent.
class WorstOverlap {
public:
    explicit WorstOverlap(const VicinityKernel& kernel) : kernel_(kernel) {
        if (!exact_overlap_available(kernel)) cloud_.emplace(kernel, kSearchSamples, kOverlapSeed);
    }

    WorstDirection operator()(double phi) const {
        if (kernel_.dim == 1) {
            return {std::max(0.0, 1.0 - phi / (2.0 * kernel_.eps)), {1.0}};
        }
        if (phi == 0.0) {
            return {1.0, std::vector<double>(kernel_.dim, 1.0 / std::sqrt(static_cast<double>(kernel_.dim)))};
        }
        const bool exact = exact_overlap_available(kernel_);
        auto objective = [&](std::span<const double> d) {
            const auto s = scaled(d, phi);
            return exact ? exact_box_overlap(kernel_, s) : cloud_->overlap(s).value;
        };
        return search_directions(kernel_.dim, objective, coarse_resolution(kernel_.dim, exact));
    }

private:
    VicinityKernel kernel_;
    std::optional<BallCloud> cloud_;
};

void check_monotone(const WorstOverlap& worst, const VicinityKernel& kernel, double hi) {
    // Max mu-change must be non-decreasing in phi for bisection to be valid.
    constexpr int kGrid = 16;
    const double slack = exact_overlap_available(kernel) ? 1e-12 : 5e-3;
    double prev = -1.0;
    for (int i = 0; i <= kGrid; ++i) {
        const double phi = hi * i / kGrid;
        const double change = 1.0 - worst(phi).overlap;
        if (change < prev - slack) {
            std::ostringstream os;
            os << "max mu-change is not monotone in phi near " << phi;
            throw Error(ErrorCode::MonotonicityViolation, os.str());
        }
        prev = std::max(prev, change);
    }
}

}  // namespace

OverlapEstimate overlap(const VicinityKernel& kernel, std::span<const double> shift, std::size_t samples,
                        std::uint64_t seed) {
    if (shift.size() != kernel.dim) throw Error(ErrorCode::InvalidArgument, "shift dimension does not match kernel");
    if (exact_overlap_available(kernel)) return {exact_box_overlap(kernel, shift), 0.0};
    if (samples == 0) throw Error(ErrorCode::InvalidArgument, "overlap needs at least one sample");
    return BallCloud(kernel, samples, seed).overlap(shift);
}

double l2_overlap_exact(std::size_t n, double eps, double distance) {
    const double a = std::abs(distance) / (2.0 * eps);
    if (a >= 1.0) return 0.0;
    if (a == 0.0) return 1.0;
    return boost::math::ibeta((static_cast<double>(n) + 1.0) / 2.0, 0.5, 1.0 - a * a);
}

WorstDirection min_direction_overlap(const VicinityKernel& kernel, double phi) {
    if (phi < 0.0) throw Error(ErrorCode::InvalidArgument, "shift magnitude must be non-negative");
    WorstOverlap worst(kernel);
    WorstDirection w = worst(phi);
    if (!exact_overlap_available(kernel) && phi > 0.0) {
        // re-evaluate the chosen direction with the full sample budget
        w.overlap = overlap(kernel, scaled(w.direction, phi)).value;
    }
    return w;
}

double max_mu_change(const VicinityKernel& kernel, double phi) {
    return 1.0 - min_direction_overlap(kernel, phi).overlap;
}

double min_adv_distance(const VicinityKernel& kernel, double kappa) {
    check_kappa(kappa);
    const double hi = 2.0 * kernel.eps * std::sqrt(static_cast<double>(kernel.dim));
    const double target = 0.5 - kappa;
    WorstOverlap worst(kernel);
    check_monotone(worst, kernel, hi);
    return bisect(0.0, hi, [&](double phi) { return 1.0 - worst(phi).overlap >= target; });
}

double solve_shrink_numeric(const VicinityKernel& kernel, double kappa) {
    check_kappa(kappa);
    const std::size_t n = kernel.dim;
    const double root_n = std::sqrt(static_cast<double>(n));
    const double hi = 2.0 * kernel.eps * root_n;
    const double target = 2.0 * kappa;

    if (exact_overlap_available(kernel)) {
        const std::vector<double> diag(n, 1.0 / root_n);
        const double phi = bisect(0.0, hi, [&](double f) {
            return overlap(kernel, scaled(diag, f)).value <= target;
        });
        // half the shift, per coordinate
        return 0.5 * phi / root_n;
    }

    // Two balls of radius eps separate exactly when their centres are 2 eps
    // apart in the ball's own norm.
    if (kappa == 0.0) return kernel.eps;

    WorstOverlap worst(kernel);
    check_monotone(worst, kernel, hi);
    const double phi = bisect(0.0, hi, [&](double f) { return worst(f).overlap <= target; });
    const auto dir = worst(phi).direction;
    return norm_value(scaled(dir, 0.5 * phi), kernel.p);
}

double directional_derivative_bound(const VicinityKernel& kernel) {
    if (kernel.dim == 1) return 1.0 / (2.0 * kernel.eps);
    if (kernel.dim != 2) {
        throw Error(ErrorCode::DimUnsupported, "directional derivative bound is available for n <= 2");
    }
    // d/ds mu(x + s u) is a boundary integral of (u . normal)^+ over the ball,
    // at most the width of the ball across u. The widest direction gives the
    // Euclidean diameter.
    double diameter = 2.0 * kernel.eps;
    if (kernel.p == Norm::Linf) diameter *= std::numbers::sqrt2;
    return diameter / kernel_volume(kernel);
}

std::vector<OverlapProfileRow> overlap_profile(const VicinityKernel& kernel, std::span<const double> phis) {
    std::vector<OverlapProfileRow> rows;
    rows.reserve(phis.size());
    for (double phi : phis) {
        const WorstDirection w = min_direction_overlap(kernel, phi);
        rows.push_back({phi, w.overlap, 1.0 - w.overlap, w.direction});
    }
    return rows;
}

double linf_diagonal_worst_limit(std::size_t n) {
    if (n <= 1) return 1.0;
    const VicinityKernel kernel{Norm::Linf, 0.5, n};  // 2 eps = 1, so phi == a
    const double root_n = std::sqrt(static_cast<double>(n));
    const std::vector<double> diag(n, 1.0 / root_n);
    WorstOverlap worst(kernel);
    constexpr double kStep = 1e-3;
    double last_ok = 0.0;
    for (double a = kStep; a < root_n; a += kStep) {
        const double d = exact_box_overlap(kernel, scaled(diag, a));
        const double w = worst(a).overlap;
        if (d > w + 1e-12) break;
        last_ok = a;
    }
    return last_ok;
}

}  // namespace robound
