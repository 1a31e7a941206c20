#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "keydyn/core/keys.hpp"

namespace keydyn {

/// Digraph timings in microseconds, laid out as
/// H(k1), DD(k1,k2), UD(k1,k2), H(k2), ..., H(kn).
/// DD is press-to-press, UD is release-to-press (negative when keys overlap),
/// H is the hold duration.
struct FeatureVector {
  PhraseId phrase = PhraseId::turkish;
  std::vector<std::int64_t> values;

  std::size_t size() const { return values.size(); }
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Expected vector length for a phrase layout (31 per phrase, 62 concatenated).
std::size_t feature_length(PhraseId phrase);

/// Column names for a layout: `H.<k>`, `DD.<k1>.<k2>`, `UD.<k1>.<k2>`.
/// Concatenated columns carry a `turkish.` / `password.` prefix.
std::vector<std::string> feature_columns(PhraseId phrase);
std::vector<std::string> feature_columns(const PhraseSpec& spec);

/// Joins a Turkish and a Password vector (Turkish first).
FeatureVector concat_features(const FeatureVector& turkish, const FeatureVector& password);

enum class RejectReason {
  empty_session,
  non_monotonic_time,
  deletion_used,
  text_mismatch,
  no_terminator,
  unpaired_key,
};

std::string_view to_string(RejectReason reason);

struct Accepted {};
struct Rejected {
  RejectReason reason;
  std::string detail;
};

using ValidationResult = std::variant<Accepted, Rejected>;

inline bool is_accepted(const ValidationResult& r) { return std::holds_alternative<Accepted>(r); }

/// Checks a raw session against the phrase. Rules are checked in order
/// (deletion, text, terminator, pairing) and the first violation is reported.
ValidationResult validate_session(std::span<const KeyEvent> events, const PhraseSpec& spec);

/// Extracts the digraph vector from an accepted session. Throws
/// malformed_session when the stream does not validate.
FeatureVector extract_features(std::span<const KeyEvent> events, const PhraseSpec& spec);

/// Elapsed time from the first measured press to the end of the final hold,
/// computed from a feature vector (sum of DD entries plus the last H).
/// Concatenated vectors sum both halves.
std::int64_t total_typing_time(const FeatureVector& fv);

}  // namespace keydyn
