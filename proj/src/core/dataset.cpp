#include "keydyn/core/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "keydyn/error.hpp"
#include "keydyn/format.hpp"

namespace keydyn {

std::string_view to_string(AgeGroup g) {
  switch (g) {
    case AgeGroup::child: return "child";
    case AgeGroup::adult: return "adult";
    case AgeGroup::impostor: return "impostor";
  }
  return "unknown";
}

std::optional<AgeGroup> parse_age_group(std::string_view s) {
  if (s == "child") return AgeGroup::child;
  if (s == "adult") return AgeGroup::adult;
  if (s == "impostor") return AgeGroup::impostor;
  return std::nullopt;
}

bool age_consistent(const SubjectMeta& meta, int collection_year) {
  const int age = collection_year - meta.birth_year;
  return meta.age_group == AgeGroup::child ? age < 15 : age > 17;
}

void check_dataset(const Dataset& d) {
  const std::size_t dim = d.dimension();
  std::set<std::tuple<int, int>> seen;
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    const auto& s = d.samples[i];
    if (s.features.phrase != d.phrase || s.features.size() != dim) {
      throw Error(ErrorCode::dimension_mismatch, "sample " + std::to_string(i) +
                                                     " does not match the dataset layout");
    }
    if (s.session < 1 || s.session > 5) {
      throw Error(ErrorCode::invalid_argument,
                  "sample " + std::to_string(i) + " has session outside 1..5");
    }
    if (!seen.emplace(s.meta.subject_id, s.session).second) {
      throw Error(ErrorCode::duplicate_key, "subject " + std::to_string(s.meta.subject_id) +
                                                " session " + std::to_string(s.session) +
                                                " phrase " + std::string(to_string(d.phrase)));
    }
  }
}

std::string dataset_csv_header(PhraseId phrase) {
  std::string h = "subject_id,gender,age_group,birth_year,session,phrase_id";
  for (const auto& c : feature_columns(phrase)) {
    h += ',';
    h += c;
  }
  return h;
}

std::string serialize_dataset_csv(const Dataset& d) {
  std::string out = dataset_csv_header(d.phrase);
  out += '\n';
  for (const auto& s : d.samples) {
    out += std::to_string(s.meta.subject_id);
    out += s.meta.gender == Gender::male ? ",M," : ",F,";
    out += to_string(s.meta.age_group);
    out += ',';
    out += std::to_string(s.meta.birth_year);
    out += ',';
    out += std::to_string(s.session);
    out += ',';
    out += to_string(d.phrase);
    for (auto v : s.features.values) {
      out += ',';
      out += std::to_string(v);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

[[noreturn]] void bad_row(std::size_t line, const std::string& why) {
  throw Error(ErrorCode::bad_row, "line " + std::to_string(line) + ": " + why);
}

}  // namespace

Dataset parse_dataset_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    auto line = text.substr(start, pos - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = pos + 1;
  }
  if (lines.empty()) throw Error(ErrorCode::bad_header, "empty input");

  Dataset d;
  bool matched = false;
  for (auto id : {PhraseId::turkish, PhraseId::password, PhraseId::concatenated}) {
    if (lines[0] == dataset_csv_header(id)) {
      d.phrase = id;
      matched = true;
      break;
    }
  }
  if (!matched) {
    const auto n = split_fields(lines[0]).size();
    throw Error(ErrorCode::bad_header, "header with " + std::to_string(n) +
                                           " columns matches no known layout");
  }

  const std::size_t dim = d.dimension();
  std::set<std::tuple<int, int>> seen;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t lineno = li + 1;
    if (lines[li].empty()) {
      if (li + 1 == lines.size()) break;
      bad_row(lineno, "empty line");
    }
    const auto f = split_fields(lines[li]);
    if (f.size() != 6 + dim) {
      bad_row(lineno, "expected " + std::to_string(6 + dim) + " fields, got " +
                          std::to_string(f.size()));
    }
    LabeledSample s;
    if (!parse_int(f[0], s.meta.subject_id)) bad_row(lineno, "subject_id");
    if (f[1] == "M") {
      s.meta.gender = Gender::male;
    } else if (f[1] == "F") {
      s.meta.gender = Gender::female;
    } else {
      bad_row(lineno, "gender must be M or F");
    }
    auto group = parse_age_group(f[2]);
    if (!group) bad_row(lineno, "age_group");
    s.meta.age_group = *group;
    if (!parse_int(f[3], s.meta.birth_year)) bad_row(lineno, "birth_year");
    if (!parse_int(f[4], s.session) || s.session < 1 || s.session > 5) {
      bad_row(lineno, "session must be 1..5");
    }
    if (f[5] != to_string(d.phrase)) bad_row(lineno, "phrase_id does not match header layout");
    s.features.phrase = d.phrase;
    s.features.values.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      if (!parse_int(f[6 + j], s.features.values[j])) {
        bad_row(lineno, "feature column " + std::to_string(j + 1) + " is not an integer");
      }
    }
    if (!seen.emplace(s.meta.subject_id, s.session).second) {
      throw Error(ErrorCode::duplicate_key,
                  "line " + std::to_string(lineno) + ": subject " +
                      std::to_string(s.meta.subject_id) + " session " +
                      std::to_string(s.session) + " phrase " + std::string(to_string(d.phrase)));
    }
    d.samples.push_back(std::move(s));
  }
  return d;
}

LabeledSample concat_samples(const LabeledSample& turkish, const LabeledSample& password) {
  if (turkish.meta.subject_id != password.meta.subject_id ||
      turkish.session != password.session) {
    throw Error(ErrorCode::mismatched_subject_or_session,
                "subject " + std::to_string(turkish.meta.subject_id) + "/" +
                    std::to_string(password.meta.subject_id) + " session " +
                    std::to_string(turkish.session) + "/" + std::to_string(password.session));
  }
  LabeledSample s;
  s.meta = turkish.meta;
  s.session = turkish.session;
  s.features = concat_features(turkish.features, password.features);
  return s;
}

Dataset concat_datasets(const Dataset& turkish, const Dataset& password) {
  if (turkish.phrase != PhraseId::turkish || password.phrase != PhraseId::password) {
    throw Error(ErrorCode::invalid_argument, "concat expects a turkish and a password dataset");
  }
  std::map<std::pair<int, int>, const LabeledSample*> by_key;
  for (const auto& s : password.samples) by_key[{s.meta.subject_id, s.session}] = &s;

  Dataset out;
  out.phrase = PhraseId::concatenated;
  for (const auto& t : turkish.samples) {
    auto it = by_key.find({t.meta.subject_id, t.session});
    if (it == by_key.end()) continue;
    out.samples.push_back(concat_samples(t, *it->second));
  }
  return out;
}

Eigen::MatrixXd design_matrix(const Dataset& d) {
  const auto n = static_cast<Eigen::Index>(d.samples.size());
  const auto dim = static_cast<Eigen::Index>(d.dimension());
  Eigen::MatrixXd x(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& v = d.samples[static_cast<std::size_t>(i)].features.values;
    if (static_cast<Eigen::Index>(v.size()) != dim) {
      throw Error(ErrorCode::dimension_mismatch, "sample " + std::to_string(i));
    }
    for (Eigen::Index j = 0; j < dim; ++j) x(i, j) = static_cast<double>(v[j]);
  }
  return x;
}

Eigen::VectorXi label_vector(const Dataset& d) {
  Eigen::VectorXi y(static_cast<Eigen::Index>(d.samples.size()));
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    y(static_cast<Eigen::Index>(i)) = class_label(d.samples[i].meta.age_group);
  }
  return y;
}

Dataset select(const Dataset& d, const std::vector<std::size_t>& indices) {
  Dataset out;
  out.phrase = d.phrase;
  out.samples.reserve(indices.size());
  for (auto i : indices) out.samples.push_back(d.samples.at(i));
  return out;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::empty_group, "quantile of empty data");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

GroupStats summarize_group(AgeGroup group, std::vector<double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::empty_group, "no samples for group " + std::string(to_string(group)));
  }
  std::sort(values.begin(), values.end());
  GroupStats s;
  s.group = group;
  s.count = values.size();
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile_sorted(values, 0.25);
  s.median = quantile_sorted(values, 0.5);
  s.q3 = quantile_sorted(values, 0.75);
  const double iqr = s.q3 - s.q1;
  const double lo_fence = s.q1 - 1.5 * iqr;
  const double hi_fence = s.q3 + 1.5 * iqr;
  s.whisker_low = s.q1;
  s.whisker_high = s.q3;
  for (double v : values) {
    if (v < lo_fence || v > hi_fence) {
      s.outliers.push_back(v);
    } else {
      s.whisker_low = std::min(s.whisker_low, v);
      s.whisker_high = std::max(s.whisker_high, v);
    }
  }
  return s;
}

std::vector<GroupStats> dataset_stats(const Dataset& d) {
  if (d.empty()) throw Error(ErrorCode::empty_group, "dataset is empty");
  std::map<AgeGroup, std::vector<double>> totals;
  for (const auto& s : d.samples) {
    totals[s.meta.age_group].push_back(static_cast<double>(total_typing_time(s.features)));
  }
  std::vector<GroupStats> out;
  for (auto& [group, values] : totals) out.push_back(summarize_group(group, std::move(values)));
  return out;
}

std::string stats_csv(const std::vector<GroupStats>& stats) {
  std::ostringstream os;
  os << "age_group,count,min,q1,median,q3,max,whisker_low,whisker_high,outliers\n";
  for (const auto& s : stats) {
    os << to_string(s.group) << ',' << s.count << ',' << format_number(s.min) << ','
       << format_number(s.q1) << ',' << format_number(s.median) << ',' << format_number(s.q3)
       << ',' << format_number(s.max) << ',' << format_number(s.whisker_low) << ','
       << format_number(s.whisker_high) << ',';
    for (std::size_t i = 0; i < s.outliers.size(); ++i) {
      if (i) os << ';';
      os << format_number(s.outliers[i]);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace keydyn
