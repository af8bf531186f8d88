#include "robound/classifiers.hpp"

#include "robound/bayes.hpp"
#include "robound/convolution.hpp"
#include "robound/error.hpp"
#include "robound/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace robound {

std::string to_string(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::Grid: return "grid";
        case ClassifierKind::Bayes: return "bayes";
        case ClassifierKind::SmoothedBayes: return "smoothed";
        case ClassifierKind::Noisy: return "noisy";
        case ClassifierKind::Voting: return "voting";
    }
    return "?";
}

GridClassifier::GridClassifier(GridGeometry geometry, std::size_t num_classes, std::vector<std::size_t> labels,
                               ClassifierKind kind)
    : geometry_(std::move(geometry)), num_classes_(num_classes), labels_(std::move(labels)), kind_(kind) {
    if (num_classes_ < 2) throw Error(ErrorCode::InvalidArgument, "a classifier needs at least 2 classes");
    if (labels_.size() != geometry_.num_cells()) {
        std::ostringstream os;
        os << "classifier has " << labels_.size() << " labels for " << geometry_.num_cells() << " cells";
        throw Error(ErrorCode::InvalidArgument, os.str());
    }
    for (std::size_t l : labels_) {
        if (l >= num_classes_) throw Error(ErrorCode::InvalidArgument, "classifier label out of range");
    }
}

std::size_t GridClassifier::label_at(std::span<const double> point) const {
    return labels_[geometry_.locate(point)];
}

Classifier::Classifier(VotingClassifier voting) : impl_(std::move(voting)) {
    const auto& v = std::get<VotingClassifier>(impl_);
    if (!v.inner) throw Error(ErrorCode::InvalidArgument, "voting classifier needs an inner classifier");
    if (v.m < 1) throw Error(ErrorCode::InvalidArgument, "voting sample count m must be at least 1");
}

ClassifierKind Classifier::kind() const {
    if (const auto* g = std::get_if<GridClassifier>(&impl_)) return g->kind();
    return ClassifierKind::Voting;
}

std::size_t Classifier::num_classes() const {
    if (const auto* g = std::get_if<GridClassifier>(&impl_)) return g->num_classes();
    return std::get<VotingClassifier>(impl_).inner->num_classes();
}

const GridClassifier& Classifier::grid() const {
    if (const auto* g = std::get_if<GridClassifier>(&impl_)) return *g;
    throw Error(ErrorCode::ModeUnsupported, "operation requires a grid-backed classifier");
}

const VotingClassifier& Classifier::voting() const {
    if (const auto* v = std::get_if<VotingClassifier>(&impl_)) return *v;
    throw Error(ErrorCode::InvalidArgument, "classifier is not a voting classifier");
}

Classifier make_grid_classifier(GridGeometry geometry, std::size_t num_classes, std::vector<std::size_t> labels) {
    return GridClassifier(std::move(geometry), num_classes, std::move(labels));
}

Classifier make_constant_classifier(const GridGeometry& geometry, std::size_t num_classes, std::size_t label) {
    return GridClassifier(geometry, num_classes, std::vector<std::size_t>(geometry.num_cells(), label));
}

Classifier make_bayes_classifier(const GridDistribution& dist) {
    std::vector<std::size_t> labels(dist.num_cells());
    for (std::size_t c = 0; c < labels.size(); ++c) labels[c] = dist.argmax_class(c);
    return GridClassifier(dist.geometry(), dist.num_classes(), std::move(labels), ClassifierKind::Bayes);
}

Classifier make_smoothed_bayes_classifier(const GridDistribution& dist, const VicinityKernel& kernel) {
    const GridDistribution smoothed = convolve(dist, kernel);
    const auto& geom = dist.geometry();
    const auto& big = smoothed.geometry();
    const std::size_t n = geom.dim();
    std::vector<std::size_t> pad(n);
    for (std::size_t i = 0; i < n; ++i) pad[i] = (big.shape()[i] - geom.shape()[i]) / 2;

    std::vector<std::size_t> labels(geom.num_cells());
    std::vector<std::size_t> multi(n);
    for (std::size_t c = 0; c < labels.size(); ++c) {
        multi = geom.multi_index(c);
        for (std::size_t i = 0; i < n; ++i) multi[i] += pad[i];
        labels[c] = smoothed.argmax_class(big.flat_index(multi));
    }
    return GridClassifier(geom, dist.num_classes(), std::move(labels), ClassifierKind::SmoothedBayes);
}

Classifier make_noisy_classifier(const GridDistribution& dist, double rho, std::uint64_t seed) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw Error(ErrorCode::InvalidArgument, "flip rate must lie in [0, 1]");
    const std::size_t k = dist.num_classes();
    Rng rng(seed);
    std::vector<std::size_t> labels(dist.num_cells());
    for (std::size_t c = 0; c < labels.size(); ++c) {
        const std::size_t base = dist.argmax_class(c);
        std::size_t label = base;
        if (rng.uniform() < rho) {
            label = static_cast<std::size_t>(rng.below(k - 1));
            if (label >= base) ++label;
        }
        labels[c] = label;
    }
    return GridClassifier(dist.geometry(), k, std::move(labels), ClassifierKind::Noisy);
}

Classifier make_voting_classifier(std::shared_ptr<const Classifier> inner, const VicinityKernel& kernel,
                                  std::size_t m, std::uint64_t seed) {
    return Classifier(VotingClassifier{std::move(inner), kernel, m, seed});
}

namespace {

std::uint64_t point_seed(std::uint64_t seed, std::span<const double> point) {
    std::uint64_t h = mix64(seed);
    for (double x : point) h = mix64(h ^ std::bit_cast<std::uint64_t>(x + 0.0));
    return h;
}

std::size_t argmax_lowest(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (v[k] > v[best]) best = k;
    }
    return best;
}

std::vector<double> mu_exact(const GridClassifier& g, const VicinityKernel& kernel, std::span<const double> point) {
    const auto& geom = g.geometry();
    const std::size_t n = geom.dim();
    if (kernel.dim != n || point.size() != n) throw Error(ErrorCode::InvalidArgument, "point/kernel dimension mismatch");
    std::vector<long> base(n);
    std::vector<double> shift(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double h = geom.cell_size(i);
        const double lo = geom.domain()[i].lo;
        base[i] = static_cast<long>(std::floor((point[i] - lo) / h));
        shift[i] = point[i] - (lo + (static_cast<double>(base[i]) + 0.5) * h);
    }
    const Stencil st = kernel_cell_weights(kernel, geom.cell_sizes(), shift);
    std::vector<double> out(g.num_classes(), 0.0);
    for (std::size_t j = 0; j < st.size(); ++j) {
        const auto o = st.offset(j);
        std::size_t flat = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const long len = static_cast<long>(geom.shape()[i]);
            const long idx = std::clamp(base[i] + o[i], 0L, len - 1);
            flat += static_cast<std::size_t>(idx) * geom.strides()[i];
        }
        out[g.label(flat)] += st.weights[j];
    }
    return out;
}

std::vector<double> mu_monte_carlo(const Classifier& classifier, const VicinityKernel& kernel,
                                   std::span<const double> point, std::size_t m, std::uint64_t seed) {
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "Monte-Carlo mu needs m >= 1");
    Rng rng(seed);
    std::vector<double> counts(classifier.num_classes(), 0.0);
    std::vector<double> x(point.size());
    for (std::size_t s = 0; s < m; ++s) {
        const auto t = sample_offset(kernel, rng);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = point[i] + t[i];
        counts[predict(classifier, x)] += 1.0;
    }
    for (double& c : counts) c /= static_cast<double>(m);
    return counts;
}

}  // namespace

std::size_t predict(const Classifier& classifier, std::span<const double> point) {
    if (classifier.grid_backed()) return classifier.grid().label_at(point);
    const auto& v = classifier.voting();
    return vote(*v.inner, v.kernel, point, v.m, point_seed(v.seed, point));
}

GridClassifier materialize(const Classifier& classifier, const GridGeometry& geometry) {
    if (classifier.grid_backed() && classifier.grid().geometry() == geometry) return classifier.grid();
    std::vector<std::size_t> labels(geometry.num_cells());
    for (std::size_t c = 0; c < labels.size(); ++c) labels[c] = predict(classifier, geometry.center(c));
    return GridClassifier(geometry, classifier.num_classes(), std::move(labels), classifier.kind());
}

MuVector mu(const Classifier& classifier, const VicinityKernel& kernel, std::span<const double> point,
            const MuMode& mode) {
    if (std::holds_alternative<ExactGridMode>(mode)) {
        if (!classifier.grid_backed()) {
            throw Error(ErrorCode::ModeUnsupported, "exact mu requires a grid-backed classifier");
        }
        return {mu_exact(classifier.grid(), kernel, point), mode};
    }
    const auto& mc = std::get<MonteCarloMode>(mode);
    return {mu_monte_carlo(classifier, kernel, point, mc.m, mc.seed), mode};
}

std::vector<std::vector<double>> mu_field(const GridClassifier& classifier, const VicinityKernel& kernel,
                                          ResolutionCheck check) {
    const auto& geom = classifier.geometry();
    if (kernel.dim != geom.dim()) throw Error(ErrorCode::InvalidArgument, "kernel/classifier dimension mismatch");
    const Stencil st = discretize_stencil(kernel, geom.cell_sizes(), check);
    const std::vector<std::size_t> no_pad(geom.dim(), 0);
    std::vector<std::vector<double>> out(classifier.num_classes());
    std::vector<double> indicator(geom.num_cells());
    for (std::size_t k = 0; k < out.size(); ++k) {
        for (std::size_t c = 0; c < indicator.size(); ++c) indicator[c] = classifier.label(c) == k ? 1.0 : 0.0;
        out[k] = convolve_field(indicator, geom, st, no_pad, Boundary::Clamp);
    }
    return out;
}

std::size_t vote(const Classifier& classifier, const VicinityKernel& kernel, std::span<const double> point,
                 std::size_t m, std::uint64_t seed) {
    return argmax_lowest(mu_monte_carlo(classifier, kernel, point, m, seed));
}

PointError combined_error(double posterior_of_label, double mu_of_label, double kappa) {
    check_kappa(kappa);
    PointError e;
    e.e_cor = 1.0 - posterior_of_label;
    e.e_cns = mu_of_label < 1.0 - kappa ? 1.0 : 0.0;
    e.e = 1.0 - (1.0 - e.e_cns) * (1.0 - e.e_cor);
    return e;
}

PointError point_error(const Classifier& classifier, const GridDistribution& dist, const VicinityKernel& kernel,
                       double kappa, std::span<const double> point, const MuMode& mode) {
    check_kappa(kappa);
    const std::size_t label = predict(classifier, point);
    const Posterior post = posterior(dist, dist.geometry().locate(point));
    const MuVector m = mu(classifier, kernel, point, mode);
    return combined_error(post.probs[label], m.mu[label], kappa);
}

}  // namespace robound
