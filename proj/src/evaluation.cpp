#include "robound/evaluation.hpp"

#include "robound/error.hpp"
#include "robound/rng.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace robound {

namespace {

void check_compatible(const Classifier& classifier, const GridDistribution& dist) {
    if (classifier.num_classes() != dist.num_classes()) {
        throw Error(ErrorCode::InvalidArgument, "classifier and distribution disagree on the number of classes");
    }
}

const GridClassifier& grid_on(const Classifier& classifier, const GridDistribution& dist) {
    const GridClassifier& g = classifier.grid();
    if (!(g.geometry() == dist.geometry())) {
        throw Error(ErrorCode::InvalidArgument, "classifier grid differs from the distribution grid");
    }
    return g;
}

/// Sum over other classes of mu at a cell; exactly zero when every cell in
/// the stencil support carries the centre label.
double disagreement(const std::vector<std::vector<double>>& mu, std::size_t label, std::size_t cell) {
    double d = 0.0;
    for (std::size_t k = 0; k < mu.size(); ++k) {
        if (k != label) d += mu[k][cell];
    }
    return d;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

double vanilla_accuracy(const Classifier& classifier, const GridDistribution& dist) {
    check_compatible(classifier, dist);
    const GridClassifier g = materialize(classifier, dist.geometry());
    double acc = 0.0;
    for (std::size_t c = 0; c < dist.num_cells(); ++c) acc += dist.density(g.label(c), c);
    return acc * dist.cell_volume();
}

double det_robust_accuracy(const Classifier& classifier, const GridDistribution& dist, const VicinityKernel& kernel) {
    check_compatible(classifier, dist);
    if (!classifier.grid_backed()) {
        throw Error(ErrorCode::ModeUnsupported,
                    "deterministic robustness is evaluated exactly and needs a grid-backed classifier");
    }
    const GridClassifier& g = grid_on(classifier, dist);
    const auto field = mu_field(g, kernel);
    double acc = 0.0;
    for (std::size_t c = 0; c < dist.num_cells(); ++c) {
        if (disagreement(field, g.label(c), c) == 0.0) acc += dist.density(g.label(c), c);
    }
    return acc * dist.cell_volume();
}

Estimate prob_robust_accuracy(const Classifier& classifier, const GridDistribution& dist,
                              const VicinityKernel& kernel, double kappa, const MuMode& mode) {
    check_kappa(kappa);
    check_compatible(classifier, dist);
    const double vol = dist.cell_volume();

    if (std::holds_alternative<ExactGridMode>(mode)) {
        if (!classifier.grid_backed()) {
            throw Error(ErrorCode::ModeUnsupported, "exact mode needs a grid-backed classifier; materialize it first");
        }
        const GridClassifier& g = grid_on(classifier, dist);
        const auto field = mu_field(g, kernel);
        double acc = 0.0;
        for (std::size_t c = 0; c < dist.num_cells(); ++c) {
            if (disagreement(field, g.label(c), c) <= kappa) acc += dist.density(g.label(c), c);
        }
        return {acc * vol, 0.0};
    }

    const auto& mc = std::get<MonteCarloMode>(mode);
    const double m = static_cast<double>(mc.m);
    double acc = 0.0;
    double var = 0.0;
    for (std::size_t c = 0; c < dist.num_cells(); ++c) {
        const auto x = dist.geometry().center(c);
        const std::size_t label = predict(classifier, x);
        const double w = dist.density(label, c) * vol;
        if (w == 0.0) continue;
        const MuVector est = mu(classifier, kernel, x, MonteCarloMode{mc.m, derive_seed(mc.seed, c)});
        const double agree = est.mu[label];
        const double disagree = 1.0 - agree;
        if (disagree <= kappa) acc += w;
        // probability that a fresh estimate lands on the consistent side
        double q = disagree <= kappa ? 1.0 : 0.0;
        if (agree > 0.0 && agree < 1.0) {
            const double se = std::sqrt(agree * (1.0 - agree) / m);
            q = normal_cdf((agree - (1.0 - kappa)) / se);
        }
        var += w * w * q * (1.0 - q);
    }
    return {acc, std::sqrt(var)};
}

RobustnessReport evaluate(const Classifier& classifier, const GridDistribution& dist, const VicinityKernel& kernel,
                          double kappa, const MuMode& mode) {
    RobustnessReport r;
    r.kappa = kappa;
    r.kernel = kernel;
    r.mode = mode;
    r.vanilla_acc = vanilla_accuracy(classifier, dist);
    if (classifier.grid_backed()) r.det_robust_acc = det_robust_accuracy(classifier, dist, kernel);
    const Estimate prob = prob_robust_accuracy(classifier, dist, kernel, kappa, mode);
    r.prob_robust_acc = prob.value;
    r.prob_robust_stderr = prob.stderr_;
    return r;
}

VotingComparison compare_voting(const Classifier& inner, const GridDistribution& dist, const VicinityKernel& kernel,
                                double kappa, std::size_t m, const std::vector<std::uint64_t>& seeds) {
    check_kappa(kappa);
    if (seeds.empty()) throw Error(ErrorCode::InvalidArgument, "compare_voting needs at least one seed");
    auto shared_inner = std::make_shared<const Classifier>(inner);
    const Classifier inner_grid(materialize(inner, dist.geometry()));

    VotingComparison out;
    out.seeds = seeds;
    out.inner_prob_acc = prob_robust_accuracy(inner_grid, dist, kernel, kappa, ExactGridMode{}).value;
    for (std::uint64_t seed : seeds) {
        const Classifier voter = make_voting_classifier(shared_inner, kernel, m, seed);
        const Classifier realised(materialize(voter, dist.geometry()));
        const double acc = prob_robust_accuracy(realised, dist, kernel, kappa, ExactGridMode{}).value;
        out.voting_prob_acc.push_back(acc);
        out.deltas.push_back(acc - out.inner_prob_acc);
    }
    const double n = static_cast<double>(out.deltas.size());
    out.mean_delta = std::accumulate(out.deltas.begin(), out.deltas.end(), 0.0) / n;
    if (out.deltas.size() < 2) {
        out.ci_low = out.ci_high = out.mean_delta;
        return out;
    }
    double ss = 0.0;
    for (double d : out.deltas) ss += (d - out.mean_delta) * (d - out.mean_delta);
    const double sd = std::sqrt(ss / (n - 1.0));
    const boost::math::students_t t(n - 1.0);
    const double half = boost::math::quantile(t, 0.975) * sd / std::sqrt(n);
    out.ci_low = out.mean_delta - half;
    out.ci_high = out.mean_delta + half;
    return out;
}

std::vector<SampleSizeRow> sample_size_study(const Classifier& inner, const GridDistribution& dist,
                                             const VicinityKernel& kernel, double kappa,
                                             const std::vector<std::size_t>& m_list, std::size_t trials,
                                             std::uint64_t base_seed) {
    check_kappa(kappa);
    if (trials == 0) throw Error(ErrorCode::InvalidArgument, "sample_size_study needs at least one trial");
    if (!std::is_sorted(m_list.begin(), m_list.end())) {
        throw Error(ErrorCode::InvalidArgument, "sample sizes must be ascending");
    }
    auto shared_inner = std::make_shared<const Classifier>(inner);
    std::vector<SampleSizeRow> rows;
    for (std::size_t m : m_list) {
        SampleSizeRow row;
        row.m = m;
        for (std::size_t t = 0; t < trials; ++t) {
            const Classifier voter = make_voting_classifier(shared_inner, kernel, m, derive_seed(base_seed, t));
            const Classifier realised(materialize(voter, dist.geometry()));
            row.values.push_back(prob_robust_accuracy(realised, dist, kernel, kappa, ExactGridMode{}).value);
        }
        const double n = static_cast<double>(trials);
        row.mean = std::accumulate(row.values.begin(), row.values.end(), 0.0) / n;
        double ss = 0.0;
        for (double v : row.values) ss += (v - row.mean) * (v - row.mean);
        row.stddev = trials > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace robound
