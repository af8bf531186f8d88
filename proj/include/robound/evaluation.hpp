#pragma once

#include "robound/classifiers.hpp"
#include "robound/distributions.hpp"
#include "robound/kernels.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace robound {

struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;
};

double vanilla_accuracy(const Classifier& classifier, const GridDistribution& dist);

/// Exact only: a cell's correct mass counts iff every cell with positive
/// stencil weight carries the centre label.
double det_robust_accuracy(const Classifier& classifier, const GridDistribution& dist,
                           const VicinityKernel& kernel);

/// A cell's correct mass counts iff 1 - mu_{h(x)} <= kappa. Monte-Carlo mode
/// reports the standard error of the aggregated threshold decisions.
Estimate prob_robust_accuracy(const Classifier& classifier, const GridDistribution& dist,
                              const VicinityKernel& kernel, double kappa, const MuMode& mode);

struct RobustnessReport {
    double vanilla_acc = 0.0;
    std::optional<double> det_robust_acc;  // exact mode only
    double prob_robust_acc = 0.0;
    double prob_robust_stderr = 0.0;
    double kappa = 0.0;
    VicinityKernel kernel;
    MuMode mode;
};

RobustnessReport evaluate(const Classifier& classifier, const GridDistribution& dist,
                          const VicinityKernel& kernel, double kappa, const MuMode& mode);

struct VotingComparison {
    double inner_prob_acc = 0.0;
    std::vector<std::uint64_t> seeds;
    std::vector<double> voting_prob_acc;
    std::vector<double> deltas;
    double mean_delta = 0.0;
    double ci_low = 0.0;   // 95% Student-t interval over seeds
    double ci_high = 0.0;
};

/// Probabilistic robust accuracy of the inner classifier against its voting
/// wrapper, one wrapper per seed. The wrapper is realised on the
/// distribution's grid (one vote per cell centre) and evaluated exactly.
VotingComparison compare_voting(const Classifier& inner, const GridDistribution& dist,
                                const VicinityKernel& kernel, double kappa, std::size_t m,
                                const std::vector<std::uint64_t>& seeds);

struct SampleSizeRow {
    std::size_t m = 0;
    double mean = 0.0;
    double stddev = 0.0;
    std::vector<double> values;
};

std::vector<SampleSizeRow> sample_size_study(const Classifier& inner, const GridDistribution& dist,
                                             const VicinityKernel& kernel, double kappa,
                                             const std::vector<std::size_t>& m_list,
                                             std::size_t trials, std::uint64_t base_seed = 0);

}  // namespace robound
