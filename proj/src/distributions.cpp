#include "robound/distributions.hpp"

#include "robound/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace robound {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) {
    static const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

/// Mass of an axis-aligned Gaussian inside the domain box.
double gaussian_box_mass(std::span<const double> mean, std::span<const double> sd,
                         const std::vector<Interval>& domain) {
    double mass = 1.0;
    for (std::size_t d = 0; d < domain.size(); ++d) {
        mass *= normal_cdf((domain[d].hi - mean[d]) / sd[d]) - normal_cdf((domain[d].lo - mean[d]) / sd[d]);
    }
    return mass;
}

double gaussian_density(std::span<const double> x, std::span<const double> mean, std::span<const double> sd) {
    double v = 1.0;
    for (std::size_t d = 0; d < x.size(); ++d) v *= normal_pdf((x[d] - mean[d]) / sd[d]) / sd[d];
    return v;
}

struct ArcPoint {
    double x;
    double y;
};

std::vector<ArcPoint> moon_arc(std::size_t cls, std::size_t points) {
    std::vector<ArcPoint> arc(points);
    for (std::size_t j = 0; j < points; ++j) {
        const double t = std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(points);
        if (cls == 0) {
            arc[j] = {std::cos(t), std::sin(t)};
        } else {
            arc[j] = {1.0 - std::cos(t), 0.5 - std::sin(t)};
        }
    }
    return arc;
}

double box_volume(const Box& b) {
    double v = 1.0;
    for (std::size_t d = 0; d < b.lo.size(); ++d) v *= b.hi[d] - b.lo[d];
    return v;
}

double box_volume_inside(const Box& b, const std::vector<Interval>& domain) {
    double v = 1.0;
    for (std::size_t d = 0; d < b.lo.size(); ++d) {
        v *= std::max(0.0, std::min(b.hi[d], domain[d].hi) - std::max(b.lo[d], domain[d].lo));
    }
    return v;
}

bool box_contains(const Box& b, std::span<const double> x) {
    for (std::size_t d = 0; d < x.size(); ++d) {
        if (x[d] < b.lo[d] || x[d] > b.hi[d]) return false;
    }
    return true;
}

struct KdeClass {
    std::vector<std::vector<double>> points;
    std::vector<double> bandwidth;
};

std::vector<KdeClass> kde_classes(const KdeParams& params, std::size_t num_classes) {
    std::vector<KdeClass> classes(num_classes);
    for (std::size_t i = 0; i < params.samples.points.size(); ++i) {
        classes[params.samples.labels[i]].points.push_back(params.samples.points[i]);
    }
    for (auto& c : classes) {
        c.bandwidth = params.bandwidth.empty() ? scott_bandwidth(c.points) : params.bandwidth;
    }
    return classes;
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

}  // namespace

// ---------------------------------------------------------------------------

GridDistribution::GridDistribution(GridGeometry geometry, std::vector<std::vector<double>> class_densities)
    : geometry_(std::move(geometry)), densities_(std::move(class_densities)) {
    if (densities_.size() < 2) invalid("a grid distribution needs at least 2 classes");
    for (std::size_t k = 0; k < densities_.size(); ++k) {
        if (densities_[k].size() != geometry_.num_cells()) {
            std::ostringstream os;
            os << "class " << k << " has " << densities_[k].size() << " density values, grid has "
               << geometry_.num_cells() << " cells";
            invalid(os.str());
        }
        for (double v : densities_[k]) {
            if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteDensity, "density values must be finite");
            if (v < 0.0) invalid("density values must be non-negative");
        }
    }
}

double GridDistribution::marginal(std::size_t cell) const {
    double m = 0.0;
    for (const auto& d : densities_) m += d[cell];
    return m;
}

std::size_t GridDistribution::argmax_class(std::size_t cell) const {
    std::size_t best = 0;
    for (std::size_t k = 1; k < densities_.size(); ++k) {
        if (densities_[k][cell] > densities_[best][cell]) best = k;
    }
    return best;
}

double GridDistribution::max_posterior(std::size_t cell) const {
    const double m = marginal(cell);
    if (m <= 0.0) return 1.0 / static_cast<double>(densities_.size());
    return densities_[argmax_class(cell)][cell] / m;
}

double GridDistribution::total_mass() const {
    double total = 0.0;
    for (const auto& d : densities_) total += std::accumulate(d.begin(), d.end(), 0.0);
    return total * geometry_.cell_volume();
}

Posterior posterior(const GridDistribution& dist, std::size_t cell) {
    const std::size_t k = dist.num_classes();
    Posterior out;
    out.probs.resize(k);
    const double m = dist.marginal(cell);
    if (m <= 0.0) {
        std::fill(out.probs.begin(), out.probs.end(), 1.0 / static_cast<double>(k));
        out.zero_marginal = true;
        return out;
    }
    for (std::size_t j = 0; j < k; ++j) out.probs[j] = dist.density(j, cell) / m;
    return out;
}

double marginal(const GridDistribution& dist, std::size_t cell) { return dist.marginal(cell); }

// ---------------------------------------------------------------------------

std::string DistributionSpec::kind() const {
    struct Visitor {
        std::string operator()(const NormalMixtureParams&) const { return "truncated_normal_mixture"; }
        std::string operator()(const MoonsParams&) const { return "moons"; }
        std::string operator()(const UniformBoxesParams&) const { return "uniform_boxes"; }
        std::string operator()(const KdeParams&) const { return "kde_samples"; }
    };
    return std::visit(Visitor{}, params);
}

std::vector<double> scott_bandwidth(const std::vector<std::vector<double>>& points) {
    if (points.size() < 2) invalid("Scott's rule needs at least 2 samples");
    const std::size_t d = points.front().size();
    const double n = static_cast<double>(points.size());
    const double factor = std::pow(n, -1.0 / (static_cast<double>(d) + 4.0));
    std::vector<double> h(d);
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (const auto& p : points) mean += p[j];
        mean /= n;
        double ss = 0.0;
        for (const auto& p : points) ss += (p[j] - mean) * (p[j] - mean);
        h[j] = factor * std::sqrt(ss / (n - 1.0));
        if (!(h[j] > 0.0)) {
            std::ostringstream os;
            os << "samples have zero spread along dimension " << j << "; set an explicit bandwidth";
            invalid(os.str());
        }
    }
    return h;
}

void validate(const DistributionSpec& spec) {
    const std::size_t k = spec.priors.size();
    const std::size_t n = spec.domain.size();
    if (k < 2) invalid("at least 2 classes (priors) are required");
    if (n == 0 || spec.shape.size() != n) invalid("domain and shape must have the same non-zero length");
    double sum = 0.0;
    for (double p : spec.priors) {
        if (!(p > 0.0)) invalid("every prior must be positive");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        std::ostringstream os;
        os.precision(17);
        os << "priors must sum to 1, got " << sum;
        invalid(os.str());
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(spec.domain[i].lo < spec.domain[i].hi)) invalid("domain intervals need lo < hi");
        if (spec.shape[i] < 2) invalid("grid shape needs at least 2 cells per dimension");
    }

    struct Checker {
        std::size_t k;
        std::size_t n;
        void operator()(const NormalMixtureParams& p) const {
            if (p.classes.size() != k) invalid("normal mixture needs one component list per class");
            for (const auto& comps : p.classes) {
                if (comps.empty()) invalid("every class needs at least one normal component");
                for (const auto& c : comps) {
                    if (c.mean.size() != n || c.stddev.size() != n) invalid("component mean/stddev must match the domain dimension");
                    for (double s : c.stddev) if (!(s > 0.0)) invalid("component stddev must be positive");
                    if (!(c.weight > 0.0)) invalid("component weight must be positive");
                }
            }
        }
        void operator()(const MoonsParams& p) const {
            if (n != 2 || k != 2) invalid("moons is a 2-class distribution in 2 dimensions");
            if (!(p.noise > 0.0)) invalid("moons noise must be positive");
            if (p.arc_points < 16) invalid("moons needs at least 16 arc quadrature points");
        }
        void operator()(const UniformBoxesParams& p) const {
            if (p.classes.size() != k) invalid("uniform boxes needs one box list per class");
            for (const auto& boxes : p.classes) {
                if (boxes.empty()) invalid("every class needs at least one box");
                for (const auto& b : boxes) {
                    if (b.lo.size() != n || b.hi.size() != n) invalid("box corners must match the domain dimension");
                    for (std::size_t d = 0; d < n; ++d) if (!(b.lo[d] < b.hi[d])) invalid("boxes need lo < hi");
                }
            }
        }
        void operator()(const KdeParams& p) const {
            if (p.samples.dim != n) invalid("sample dimension must match the domain dimension");
            if (!p.bandwidth.empty()) {
                if (p.bandwidth.size() != n) invalid("bandwidth needs one value per dimension");
                for (double h : p.bandwidth) if (!(h > 0.0)) invalid("bandwidth must be positive");
            }
            std::vector<std::size_t> counts(k, 0);
            for (std::size_t i = 0; i < p.samples.labels.size(); ++i) {
                const std::size_t label = p.samples.labels[i];
                if (label >= k) {
                    std::ostringstream os;
                    os << "sample " << i << " has label " << label << " but only " << k << " classes are declared";
                    invalid(os.str());
                }
                if (p.samples.points[i].size() != n) invalid("every sample needs one coordinate per dimension");
                ++counts[label];
            }
            for (std::size_t c = 0; c < k; ++c) {
                if (counts[c] < 2) {
                    std::ostringstream os;
                    os << "class " << c << " has " << counts[c] << " samples; kernel density estimation needs at least 2";
                    throw Error(ErrorCode::EmptyClass, os.str());
                }
            }
        }
    };
    std::visit(Checker{k, n}, spec.params);
}

double clipped_mass_fraction(const DistributionSpec& spec) {
    const auto& domain = spec.domain;
    const std::size_t k = spec.priors.size();
    std::vector<double> inside(k, 0.0);

    if (const auto* p = std::get_if<NormalMixtureParams>(&spec.params)) {
        for (std::size_t c = 0; c < k; ++c) {
            double wsum = 0.0;
            for (const auto& comp : p->classes[c]) {
                inside[c] += comp.weight * gaussian_box_mass(comp.mean, comp.stddev, domain);
                wsum += comp.weight;
            }
            inside[c] /= wsum;
        }
    } else if (const auto* p = std::get_if<MoonsParams>(&spec.params)) {
        const std::vector<double> sd{p->noise, p->noise};
        for (std::size_t c = 0; c < k; ++c) {
            for (const auto& a : moon_arc(c, p->arc_points)) {
                const double mean[2] = {a.x, a.y};
                inside[c] += gaussian_box_mass(mean, sd, domain);
            }
            inside[c] /= static_cast<double>(p->arc_points);
        }
    } else if (const auto* p = std::get_if<UniformBoxesParams>(&spec.params)) {
        for (std::size_t c = 0; c < k; ++c) {
            double total = 0.0;
            for (const auto& b : p->classes[c]) {
                total += box_volume(b);
                inside[c] += box_volume_inside(b, domain);
            }
            inside[c] /= total;
        }
    } else if (const auto* p = std::get_if<KdeParams>(&spec.params)) {
        const auto classes = kde_classes(*p, k);
        for (std::size_t c = 0; c < k; ++c) {
            for (const auto& s : classes[c].points) inside[c] += gaussian_box_mass(s, classes[c].bandwidth, domain);
            inside[c] /= static_cast<double>(classes[c].points.size());
        }
    }
    double clipped = 0.0;
    for (std::size_t c = 0; c < k; ++c) clipped += spec.priors[c] * (1.0 - inside[c]);
    return std::max(0.0, clipped);
}

GridDistribution build_distribution(const DistributionSpec& spec) {
    validate(spec);
    const std::size_t k = spec.priors.size();
    GridGeometry geometry(spec.domain, spec.shape);
    const std::size_t cells = geometry.num_cells();
    const std::size_t n = geometry.dim();

    const double clipped = clipped_mass_fraction(spec);
    if (clipped >= 0.01) {
        std::ostringstream os;
        os.precision(4);
        os << "domain clips " << 100.0 * clipped << "% of the distribution's mass (limit 1%)";
        throw DomainTooSmallError(clipped, os.str());
    }

    // class-conditional densities at cell centres
    std::vector<std::vector<double>> dens(k, std::vector<double>(cells, 0.0));
    std::vector<double> x(n);
    auto for_each_center = [&](auto&& fn) {
        for (std::size_t cell = 0; cell < cells; ++cell) {
            std::size_t rem = cell;
            for (std::size_t d = 0; d < n; ++d) {
                x[d] = geometry.center_coord(d, rem / geometry.strides()[d]);
                rem %= geometry.strides()[d];
            }
            fn(cell, std::span<const double>(x));
        }
    };

    if (const auto* p = std::get_if<NormalMixtureParams>(&spec.params)) {
        for_each_center([&](std::size_t cell, std::span<const double> pt) {
            for (std::size_t c = 0; c < k; ++c) {
                double v = 0.0;
                double wsum = 0.0;
                for (const auto& comp : p->classes[c]) {
                    v += comp.weight * gaussian_density(pt, comp.mean, comp.stddev);
                    wsum += comp.weight;
                }
                dens[c][cell] = v / wsum;
            }
        });
    } else if (const auto* p = std::get_if<MoonsParams>(&spec.params)) {
        const double s = p->noise;
        const double norm = 1.0 / (2.0 * std::numbers::pi * s * s * static_cast<double>(p->arc_points));
        const double cutoff = (12.0 * s) * (12.0 * s);
        const std::vector<ArcPoint> arcs[2] = {moon_arc(0, p->arc_points), moon_arc(1, p->arc_points)};
        for_each_center([&](std::size_t cell, std::span<const double> pt) {
            for (std::size_t c = 0; c < 2; ++c) {
                double v = 0.0;
                for (const auto& a : arcs[c]) {
                    const double dx = pt[0] - a.x;
                    const double dy = pt[1] - a.y;
                    const double r2 = dx * dx + dy * dy;
                    if (r2 < cutoff) v += std::exp(-0.5 * r2 / (s * s));
                }
                dens[c][cell] = v * norm;
            }
        });
    } else if (const auto* p = std::get_if<UniformBoxesParams>(&spec.params)) {
        std::vector<double> volume(k, 0.0);
        for (std::size_t c = 0; c < k; ++c) {
            for (const auto& b : p->classes[c]) volume[c] += box_volume(b);
        }
        for_each_center([&](std::size_t cell, std::span<const double> pt) {
            for (std::size_t c = 0; c < k; ++c) {
                for (const auto& b : p->classes[c]) {
                    if (box_contains(b, pt)) {
                        dens[c][cell] = 1.0 / volume[c];
                        break;
                    }
                }
            }
        });
    } else if (const auto* p = std::get_if<KdeParams>(&spec.params)) {
        const auto classes = kde_classes(*p, k);
        for_each_center([&](std::size_t cell, std::span<const double> pt) {
            for (std::size_t c = 0; c < k; ++c) {
                double v = 0.0;
                for (const auto& s : classes[c].points) v += gaussian_density(pt, s, classes[c].bandwidth);
                dens[c][cell] = v / static_cast<double>(classes[c].points.size());
            }
        });
    }

    const double vol = geometry.cell_volume();
    double total = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        double class_mass = 0.0;
        for (double& v : dens[c]) {
            if (!std::isfinite(v)) {
                std::ostringstream os;
                os << "class " << c << " produced a non-finite density";
                throw Error(ErrorCode::NonFiniteDensity, os.str());
            }
            v *= spec.priors[c];
            class_mass += v;
        }
        if (!(class_mass > 0.0)) {
            std::ostringstream os;
            os << "class " << c << " has no mass on the grid";
            throw Error(ErrorCode::EmptyClass, os.str());
        }
        total += class_mass * vol;
    }
    for (auto& d : dens) {
        for (double& v : d) v /= total;
    }
    return GridDistribution(std::move(geometry), std::move(dens));
}

DistributionSpec canonical_normals_spec(std::size_t cells) {
    DistributionSpec spec;
    NormalMixtureParams p;
    p.classes = {{NormalComponent{{-1.0}, {0.8}, 1.0}}, {NormalComponent{{1.0}, {0.8}, 1.0}}};
    spec.params = std::move(p);
    spec.priors = {0.5, 0.5};
    spec.domain = {{-5.0, 5.0}};
    spec.shape = {cells};
    return spec;
}

DistributionSpec step_spec(std::size_t cells) {
    DistributionSpec spec;
    UniformBoxesParams p;
    p.classes = {{Box{{-1.0}, {0.0}}}, {Box{{0.0}, {1.0}}}};
    spec.params = std::move(p);
    spec.priors = {0.5, 0.5};
    spec.domain = {{-1.0, 1.0}};
    spec.shape = {cells};
    return spec;
}

DistributionSpec moons_spec(std::size_t nx, std::size_t ny) {
    DistributionSpec spec;
    spec.params = MoonsParams{0.1, 1000};
    spec.priors = {0.5, 0.5};
    spec.domain = {{-1.5, 2.5}, {-1.0, 1.5}};
    spec.shape = {nx, ny};
    return spec;
}

}  // namespace robound
