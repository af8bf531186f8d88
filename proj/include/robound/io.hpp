#pragma once

#include "robound/bayes.hpp"
#include "robound/classifiers.hpp"
#include "robound/distributions.hpp"
#include "robound/evaluation.hpp"

#include <filesystem>
#include <string>

namespace robound::io {

inline constexpr int kSpecVersion = 1;
inline constexpr int kGridVersion = 1;
inline constexpr int kClassifierVersion = 1;
inline constexpr int kReportVersion = 1;

/// Parses a JSON distribution spec. Relative `samples_file` paths resolve
/// against `base_dir`.
DistributionSpec parse_spec(const std::string& text,
                            const std::filesystem::path& base_dir = {});
DistributionSpec read_spec(const std::filesystem::path& path);
std::string spec_to_json(const DistributionSpec& spec);

/// Delimited rows: coordinates followed by an integer label. Commas,
/// semicolons, tabs and spaces all separate fields; '#' starts a comment.
LabeledSamples parse_samples(const std::string& text);
LabeledSamples read_samples(const std::filesystem::path& path);

std::string grid_to_json(const GridDistribution& dist);
GridDistribution grid_from_json(const std::string& text);
void write_grid(const GridDistribution& dist, const std::filesystem::path& path);
GridDistribution read_grid(const std::filesystem::path& path);

std::string classifier_to_json(const GridClassifier& classifier);
GridClassifier classifier_from_json(const std::string& text);
void write_classifier(const GridClassifier& classifier, const std::filesystem::path& path);
GridClassifier read_classifier(const std::filesystem::path& path);

std::string bounds_to_json(const BoundsReport& report);
std::string sweep_to_csv(const BoundsReport& report);
std::string report_to_json(const RobustnessReport& report);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace robound::io
