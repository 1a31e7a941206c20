#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "keydyn/core/features.hpp"

namespace keydyn {

enum class Gender { male, female };
enum class AgeGroup { child, adult, impostor };

std::string_view to_string(AgeGroup g);
std::optional<AgeGroup> parse_age_group(std::string_view s);

/// Survey answers kept as metadata only; never used as classifier input.
struct Survey {
  std::string handedness;
  bool owns_computer = false;
  std::string years_of_use;
  std::string daily_hours;
  std::string words_per_day;

  friend bool operator==(const Survey&, const Survey&) = default;
};

struct SubjectMeta {
  int subject_id = 0;
  Gender gender = Gender::male;
  AgeGroup age_group = AgeGroup::adult;
  int birth_year = 0;
  std::optional<Survey> survey;

  friend bool operator==(const SubjectMeta&, const SubjectMeta&) = default;
};

/// Child means younger than 15, adult/impostor means older than 17 at
/// `collection_year`. Teenagers fit neither group.
bool age_consistent(const SubjectMeta& meta, int collection_year);

/// +1 for adult-labelled samples (impostors included), -1 for children.
inline int class_label(AgeGroup g) { return g == AgeGroup::child ? -1 : +1; }

struct LabeledSample {
  SubjectMeta meta;
  int session = 1;
  FeatureVector features;

  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

struct Dataset {
  PhraseId phrase = PhraseId::turkish;
  std::vector<LabeledSample> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  std::size_t dimension() const { return feature_length(phrase); }
};

/// Checks layout and (subject, session, phrase) uniqueness; throws on violation.
void check_dataset(const Dataset& d);

Dataset parse_dataset_csv(std::string_view text);
std::string serialize_dataset_csv(const Dataset& d);
std::string dataset_csv_header(PhraseId phrase);

/// Joins two samples of the same subject and session (Turkish first).
/// Throws mismatched_subject_or_session otherwise.
LabeledSample concat_samples(const LabeledSample& turkish, const LabeledSample& password);

/// Joins per-session Turkish and Password samples of the same subject.
/// Samples without a partner in the other dataset are dropped.
Dataset concat_datasets(const Dataset& turkish, const Dataset& password);

/// Feature rows as doubles (rows = samples).
Eigen::MatrixXd design_matrix(const Dataset& d);
Eigen::VectorXi label_vector(const Dataset& d);

Dataset select(const Dataset& d, const std::vector<std::size_t>& indices);

/// Box-plot summary of total typing time for one group.
struct GroupStats {
  AgeGroup group = AgeGroup::adult;
  std::size_t count = 0;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  double whisker_low = 0, whisker_high = 0;
  std::vector<double> outliers;
};

/// Quantile by linear interpolation between closest ranks (R-7) on sorted data.
double quantile_sorted(const std::vector<double>& sorted, double p);

GroupStats summarize_group(AgeGroup group, std::vector<double> values);
std::vector<GroupStats> dataset_stats(const Dataset& d);
std::string stats_csv(const std::vector<GroupStats>& stats);

}  // namespace keydyn
