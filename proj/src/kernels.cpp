#include "robound/kernels.hpp"

#include "robound/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace robound {

Norm parse_norm(const std::string& text) {
    if (text == "1") return Norm::L1;
    if (text == "2") return Norm::L2;
    if (text == "inf" || text == "Inf" || text == "INF") return Norm::Linf;
    throw Error(ErrorCode::InvalidArgument, "norm must be one of 1, 2, inf; got '" + text + "'");
}

std::string to_string(Norm p) {
    switch (p) {
        case Norm::L1: return "1";
        case Norm::L2: return "2";
        case Norm::Linf: return "inf";
    }
    return "?";
}

double norm_value(std::span<const double> v, Norm p) {
    double acc = 0.0;
    switch (p) {
        case Norm::L1:
            for (double x : v) acc += std::abs(x);
            return acc;
        case Norm::L2:
            for (double x : v) acc += x * x;
            return std::sqrt(acc);
        case Norm::Linf:
            for (double x : v) acc = std::max(acc, std::abs(x));
            return acc;
    }
    return acc;
}

bool VicinityKernel::contains(std::span<const double> delta) const {
    return norm_value(delta, p) <= eps;
}

VicinityKernel make_kernel(Norm p, double eps, std::size_t dim) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        std::ostringstream os;
        os << "kernel radius must be positive and finite, got " << eps;
        throw Error(ErrorCode::InvalidArgument, os.str());
    }
    if (dim == 0) throw Error(ErrorCode::InvalidArgument, "kernel dimension must be at least 1");
    return VicinityKernel{p, eps, dim};
}

double kernel_volume(Norm p, std::size_t n, double eps) {
    const double dn = static_cast<double>(n);
    switch (p) {
        case Norm::Linf:
            return std::pow(2.0 * eps, dn);
        case Norm::L1:
            // Gamma(1 + 1/1) = 1
            return std::pow(2.0 * eps, dn) / std::tgamma(1.0 + dn);
        case Norm::L2:
            return std::pow(2.0 * eps * std::tgamma(1.5), dn) / std::tgamma(1.0 + dn / 2.0);
    }
    return 0.0;
}

double kernel_volume(const VicinityKernel& kernel) {
    return kernel_volume(kernel.p, kernel.dim, kernel.eps);
}

double kernel_pdf(const VicinityKernel& kernel, std::span<const double> delta) {
    return kernel.contains(delta) ? 1.0 / kernel_volume(kernel) : 0.0;
}

namespace {

constexpr int kSubcellsPerAxis = 4;
constexpr double kAxisWeightFloor = 1e-12;

/// Odometer over the integer box [-radius_i, radius_i].
class OffsetCounter {
public:
    explicit OffsetCounter(std::vector<int> radius) : radius_(std::move(radius)), current_(radius_.size()) {
        for (std::size_t i = 0; i < radius_.size(); ++i) current_[i] = -radius_[i];
    }
    const std::vector<int>& current() const { return current_; }
    bool next() {
        for (std::size_t i = radius_.size(); i-- > 0;) {
            if (current_[i] < radius_[i]) {
                ++current_[i];
                return true;
            }
            current_[i] = -radius_[i];
        }
        return false;
    }

private:
    std::vector<int> radius_;
    std::vector<int> current_;
};

void check_resolution(const VicinityKernel& kernel, std::span<const double> cell_sizes) {
    for (std::size_t i = 0; i < cell_sizes.size(); ++i) {
        if (cell_sizes[i] > kernel.eps / kMinCellsPerRadius * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "cell size " << cell_sizes[i] << " on axis " << i << " exceeds eps/5 = "
               << kernel.eps / kMinCellsPerRadius << "; refine the grid";
            throw Error(ErrorCode::ResolutionTooCoarse, os.str());
        }
    }
}

Stencil linf_weights(const VicinityKernel& kernel, std::span<const double> h, std::span<const double> shift) {
    const std::size_t n = h.size();
    Stencil st;
    st.dim = n;
    st.radius.resize(n);
    st.axis_weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int reach = static_cast<int>(std::ceil((kernel.eps + std::abs(shift[i])) / h[i] + 0.5));
        std::vector<double> w(2 * reach + 1, 0.0);
        const double klo = shift[i] - kernel.eps;
        const double khi = shift[i] + kernel.eps;
        double sum = 0.0;
        for (int o = -reach; o <= reach; ++o) {
            const double clo = (o - 0.5) * h[i];
            const double chi = (o + 0.5) * h[i];
            double ov = std::max(0.0, std::min(chi, khi) - std::max(clo, klo)) / (2.0 * kernel.eps);
            if (ov < kAxisWeightFloor) ov = 0.0;
            w[o + reach] = ov;
            sum += ov;
        }
        // trim to the smallest symmetric support
        int r = reach;
        while (r > 0 && w[reach - r] == 0.0 && w[reach + r] == 0.0) --r;
        std::vector<double> trimmed(w.begin() + (reach - r), w.begin() + (reach + r + 1));
        for (double& v : trimmed) v /= sum;
        st.radius[i] = r;
        st.axis_weights[i] = std::move(trimmed);
    }
    OffsetCounter counter(st.radius);
    do {
        const auto& o = counter.current();
        double w = 1.0;
        for (std::size_t i = 0; i < n; ++i) w *= st.axis_weights[i][o[i] + st.radius[i]];
        if (w > 0.0) {
            st.offsets.insert(st.offsets.end(), o.begin(), o.end());
            st.weights.push_back(w);
        }
    } while (counter.next());
    return st;
}

Stencil supersampled_weights(const VicinityKernel& kernel, std::span<const double> h, std::span<const double> shift) {
    const std::size_t n = h.size();
    std::vector<int> reach(n);
    for (std::size_t i = 0; i < n; ++i) {
        reach[i] = static_cast<int>(std::ceil((kernel.eps + std::abs(shift[i])) / h[i] + 0.5));
    }
    std::size_t subpoints = 1;
    for (std::size_t i = 0; i < n; ++i) subpoints *= kSubcellsPerAxis;

    Stencil st;
    st.dim = n;
    st.radius.assign(n, 0);
    std::vector<double> pt(n);
    std::vector<int> sub(n);
    double total = 0.0;
    OffsetCounter counter(reach);
    do {
        const auto& o = counter.current();
        std::size_t inside = 0;
        for (std::size_t s = 0; s < subpoints; ++s) {
            std::size_t rem = s;
            for (std::size_t i = 0; i < n; ++i) {
                const auto j = static_cast<double>(rem % kSubcellsPerAxis);
                rem /= kSubcellsPerAxis;
                pt[i] = (o[i] + (j + 0.5) / kSubcellsPerAxis - 0.5) * h[i] - shift[i];
            }
            if (norm_value(pt, kernel.p) <= kernel.eps) ++inside;
        }
        if (inside > 0) {
            st.offsets.insert(st.offsets.end(), o.begin(), o.end());
            st.weights.push_back(static_cast<double>(inside));
            total += static_cast<double>(inside);
            for (std::size_t i = 0; i < n; ++i) st.radius[i] = std::max(st.radius[i], std::abs(o[i]));
        }
    } while (counter.next());

    if (total == 0.0) {
        // kernel falls between sub-cell samples: all mass in the cell holding the centre
        std::vector<int> o(n);
        for (std::size_t i = 0; i < n; ++i) o[i] = static_cast<int>(std::lround(shift[i] / h[i]));
        for (std::size_t i = 0; i < n; ++i) st.radius[i] = std::abs(o[i]);
        st.offsets = o;
        st.weights = {1.0};
        return st;
    }
    for (double& w : st.weights) w /= total;
    return st;
}

}  // namespace

Stencil kernel_cell_weights(const VicinityKernel& kernel, std::span<const double> cell_sizes,
                            std::span<const double> shift) {
    if (cell_sizes.size() != kernel.dim || shift.size() != kernel.dim) {
        throw Error(ErrorCode::InvalidArgument, "kernel dimension does not match the grid");
    }
    if (kernel.p == Norm::Linf || kernel.dim == 1) return linf_weights(kernel, cell_sizes, shift);
    return supersampled_weights(kernel, cell_sizes, shift);
}

Stencil discretize_stencil(const VicinityKernel& kernel, std::span<const double> cell_sizes,
                           ResolutionCheck check) {
    if (check == ResolutionCheck::Enforce) check_resolution(kernel, cell_sizes);
    const std::vector<double> zero(kernel.dim, 0.0);
    return kernel_cell_weights(kernel, cell_sizes, zero);
}

std::vector<double> sample_offset(const VicinityKernel& kernel, Rng& rng) {
    const std::size_t n = kernel.dim;
    std::vector<double> out(n);
    switch (kernel.p) {
        case Norm::Linf:
            for (auto& v : out) v = rng.uniform(-kernel.eps, kernel.eps);
            break;
        case Norm::L2: {
            double r2 = 0.0;
            do {
                r2 = 0.0;
                for (auto& v : out) {
                    v = rng.normal();
                    r2 += v * v;
                }
            } while (r2 == 0.0);
            const double scale = kernel.eps * std::pow(rng.uniform(), 1.0 / static_cast<double>(n)) / std::sqrt(r2);
            for (auto& v : out) v *= scale;
            break;
        }
        case Norm::L1: {
            // n+1 exponential spacings give a uniform point of the simplex;
            // random signs reflect it into every orthant.
            double total = 0.0;
            for (auto& v : out) {
                v = rng.exponential();
                total += v;
            }
            total += rng.exponential();
            for (auto& v : out) {
                const double sign = (rng.bits() & 1ULL) ? 1.0 : -1.0;
                v = sign * kernel.eps * v / total;
            }
            break;
        }
    }
    return out;
}

VicinityKernel shrink_kernel(const VicinityKernel& kernel, double kappa) {
    check_kappa(kappa);
    if (kernel.p != Norm::Linf) {
        throw Error(ErrorCode::UnsupportedNorm,
                    "closed-form shrinking exists only for L^inf kernels; use solve_shrink_numeric");
    }
    VicinityKernel out = kernel;
    out.eps = kernel.eps * (1.0 - std::pow(2.0 * kappa, 1.0 / static_cast<double>(kernel.dim)));
    return out;
}

}  // namespace robound
