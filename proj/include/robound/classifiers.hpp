#pragma once

#include "robound/distributions.hpp"
#include "robound/kernels.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace robound {

enum class ClassifierKind { Grid, Bayes, SmoothedBayes, Noisy, Voting };

std::string to_string(ClassifierKind kind);

/// Piecewise-constant classifier: one label per grid cell. Bayes, smoothed
/// Bayes and noisy classifiers are all grid classifiers with a provenance tag.
class GridClassifier {
public:
    GridClassifier(GridGeometry geometry, std::size_t num_classes, std::vector<std::size_t> labels,
                   ClassifierKind kind = ClassifierKind::Grid);

    const GridGeometry& geometry() const { return geometry_; }
    std::size_t num_classes() const { return num_classes_; }
    ClassifierKind kind() const { return kind_; }
    const std::vector<std::size_t>& labels() const { return labels_; }
    std::size_t label(std::size_t cell) const { return labels_[cell]; }
    /// Points outside the domain take the label of the nearest cell.
    std::size_t label_at(std::span<const double> point) const;

private:
    GridGeometry geometry_;
    std::size_t num_classes_;
    std::vector<std::size_t> labels_;
    ClassifierKind kind_;
};

class Classifier;

/// h-dagger: majority vote of the inner classifier over m uniform samples
/// from the vicinity. The sample stream for a point is seeded from `seed`
/// and the point's coordinates.
struct VotingClassifier {
    std::shared_ptr<const Classifier> inner;
    VicinityKernel kernel;
    std::size_t m = 100;
    std::uint64_t seed = 0;
};

class Classifier {
public:
    Classifier(GridClassifier grid) : impl_(std::move(grid)) {}
    Classifier(VotingClassifier voting);

    ClassifierKind kind() const;
    std::size_t num_classes() const;
    bool grid_backed() const { return std::holds_alternative<GridClassifier>(impl_); }
    const GridClassifier& grid() const;
    const VotingClassifier& voting() const;

private:
    std::variant<GridClassifier, VotingClassifier> impl_;
};

Classifier make_grid_classifier(GridGeometry geometry, std::size_t num_classes,
                                std::vector<std::size_t> labels);
Classifier make_constant_classifier(const GridGeometry& geometry, std::size_t num_classes,
                                    std::size_t label);
Classifier make_bayes_classifier(const GridDistribution& dist);
/// Argmax posterior of dist * kernel, restricted to the cells of dist.
Classifier make_smoothed_bayes_classifier(const GridDistribution& dist, const VicinityKernel& kernel);

inline constexpr double kDefaultFlipRate = 0.15;

/// Bayes labels with each cell flipped, with probability rho, to a uniformly
/// chosen other class. The flip table is fixed by the seed.
Classifier make_noisy_classifier(const GridDistribution& dist, double rho, std::uint64_t seed);
Classifier make_voting_classifier(std::shared_ptr<const Classifier> inner,
                                  const VicinityKernel& kernel, std::size_t m, std::uint64_t seed);

std::size_t predict(const Classifier& classifier, std::span<const double> point);

/// Evaluates the classifier at every cell centre of `geometry`.
GridClassifier materialize(const Classifier& classifier, const GridGeometry& geometry);

struct MonteCarloMode {
    std::size_t m = 100;
    std::uint64_t seed = 0;
};
struct ExactGridMode {};
using MuMode = std::variant<ExactGridMode, MonteCarloMode>;

struct MuVector {
    std::vector<double> mu;
    MuMode mode;
};

/// Probability that a vicinity sample of `point` is predicted as each class.
/// Exact mode integrates the kernel over the classifier's cells and needs a
/// grid-backed classifier (ModeUnsupported otherwise).
MuVector mu(const Classifier& classifier, const VicinityKernel& kernel,
            std::span<const double> point, const MuMode& mode);

/// Exact mu for every cell centre of the classifier's grid: mu[k][cell].
/// A piecewise-constant classifier needs no resolution floor, so the check
/// is relaxed unless requested.
std::vector<std::vector<double>> mu_field(const GridClassifier& classifier,
                                          const VicinityKernel& kernel,
                                          ResolutionCheck check = ResolutionCheck::Relaxed);

/// Argmax of the Monte-Carlo mu (lowest index on ties).
std::size_t vote(const Classifier& classifier, const VicinityKernel& kernel,
                 std::span<const double> point, std::size_t m, std::uint64_t seed);

struct PointError {
    double e_cor = 0.0;
    double e_cns = 0.0;
    double e = 0.0;
};

/// Combined error at a point: e = 1 - (1 - e_cns)(1 - e_cor).
PointError combined_error(double posterior_of_label, double mu_of_label, double kappa);

PointError point_error(const Classifier& classifier, const GridDistribution& dist,
                       const VicinityKernel& kernel, double kappa,
                       std::span<const double> point, const MuMode& mode);

}  // namespace robound
