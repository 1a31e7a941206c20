#include "keydyn/core/features.hpp"

#include <map>

#include "keydyn/error.hpp"

namespace keydyn {

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::empty_session: return "empty_session";
    case RejectReason::non_monotonic_time: return "non_monotonic_time";
    case RejectReason::deletion_used: return "deletion_used";
    case RejectReason::text_mismatch: return "text_mismatch";
    case RejectReason::no_terminator: return "no_terminator";
    case RejectReason::unpaired_key: return "unpaired_key";
  }
  return "unknown";
}

std::size_t feature_length(PhraseId phrase) {
  if (phrase == PhraseId::concatenated) {
    return turkish_phrase().feature_count() + password_phrase().feature_count();
  }
  return phrase_spec(phrase).feature_count();
}

std::vector<std::string> feature_columns(const PhraseSpec& spec) {
  std::vector<std::string> cols;
  const auto& keys = spec.key_tokens;
  cols.reserve(3 * keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    cols.push_back("H." + keys[i]);
    if (i + 1 < keys.size()) {
      cols.push_back("DD." + keys[i] + "." + keys[i + 1]);
      cols.push_back("UD." + keys[i] + "." + keys[i + 1]);
    }
  }
  return cols;
}

std::vector<std::string> feature_columns(PhraseId phrase) {
  if (phrase != PhraseId::concatenated) return feature_columns(phrase_spec(phrase));
  std::vector<std::string> cols;
  for (const auto& c : feature_columns(turkish_phrase())) cols.push_back("turkish." + c);
  for (const auto& c : feature_columns(password_phrase())) cols.push_back("password." + c);
  return cols;
}

FeatureVector concat_features(const FeatureVector& turkish, const FeatureVector& password) {
  if (turkish.phrase != PhraseId::turkish || password.phrase != PhraseId::password) {
    throw Error(ErrorCode::invalid_argument, "concat expects a turkish and a password vector");
  }
  FeatureVector out;
  out.phrase = PhraseId::concatenated;
  out.values.reserve(turkish.size() + password.size());
  out.values.insert(out.values.end(), turkish.values.begin(), turkish.values.end());
  out.values.insert(out.values.end(), password.values.begin(), password.values.end());
  return out;
}

namespace {

Rejected reject(RejectReason r, std::string detail) { return Rejected{r, std::move(detail)}; }

}  // namespace

ValidationResult validate_session(std::span<const KeyEvent> events, const PhraseSpec& spec) {
  if (events.empty()) return reject(RejectReason::empty_session, "no events");
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].t_us < events[i - 1].t_us) {
      return reject(RejectReason::non_monotonic_time, "event " + std::to_string(i));
    }
  }
  if (events.front().t_us < 0) return reject(RejectReason::non_monotonic_time, "negative timestamp");

  for (const auto& e : events) {
    if (e.kind == KeyKind::press && is_deletion(e.key)) {
      return reject(RejectReason::deletion_used, e.key);
    }
  }

  std::vector<const KeyEvent*> measured;
  for (const auto& e : events) {
    if (e.kind == KeyKind::press && !is_modifier(e.key)) measured.push_back(&e);
  }
  const bool terminated = !measured.empty() && measured.back()->key == kEnter;
  const std::size_t body = terminated ? measured.size() - 1 : measured.size();

  std::string text;
  for (std::size_t i = 0; i < body; ++i) {
    const auto& key = measured[i]->key;
    if (key == kEnter) {
      text.push_back('\n');
    } else if (auto c = token_char(key)) {
      text.push_back(*c);
    } else {
      return reject(RejectReason::text_mismatch, "unexpected key " + key);
    }
  }
  if (text != spec.text) return reject(RejectReason::text_mismatch, "typed \"" + text + "\"");
  if (!terminated) return reject(RejectReason::no_terminator, "last key is not Enter");

  std::map<std::string, bool, std::less<>> down;
  for (const auto& e : events) {
    if (is_modifier(e.key)) continue;
    bool& is_down = down[e.key];
    if (e.kind == KeyKind::press) {
      if (is_down) return reject(RejectReason::unpaired_key, "repeated press of " + e.key);
      is_down = true;
    } else {
      if (!is_down) return reject(RejectReason::unpaired_key, "release without press of " + e.key);
      is_down = false;
    }
  }
  for (const auto& [key, is_down] : down) {
    if (is_down) return reject(RejectReason::unpaired_key, "never released " + key);
  }
  return Accepted{};
}

FeatureVector extract_features(std::span<const KeyEvent> events, const PhraseSpec& spec) {
  if (auto v = validate_session(events, spec); !is_accepted(v)) {
    const auto& r = std::get<Rejected>(v);
    throw Error(ErrorCode::malformed_session,
                std::string(to_string(r.reason)) + " (" + r.detail + ")");
  }

  struct Stroke {
    std::int64_t press;
    std::int64_t release;
  };
  std::vector<Stroke> strokes;
  strokes.reserve(spec.key_tokens.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (e.kind != KeyKind::press || is_modifier(e.key)) continue;
    std::size_t j = i + 1;
    while (events[j].kind != KeyKind::release || events[j].key != e.key) ++j;
    strokes.push_back({e.t_us, events[j].t_us});
  }

  FeatureVector fv;
  fv.phrase = spec.id;
  fv.values.reserve(spec.feature_count());
  for (std::size_t i = 0; i < strokes.size(); ++i) {
    fv.values.push_back(strokes[i].release - strokes[i].press);
    if (i + 1 < strokes.size()) {
      fv.values.push_back(strokes[i + 1].press - strokes[i].press);
      fv.values.push_back(strokes[i + 1].press - strokes[i].release);
    }
  }
  return fv;
}

namespace {

std::int64_t phrase_total(std::span<const std::int64_t> v) {
  // Layout H,DD,UD repeating; DD sits at 1 mod 3.
  std::int64_t total = v.back();
  for (std::size_t i = 1; i < v.size(); i += 3) total += v[i];
  return total;
}

}  // namespace

std::int64_t total_typing_time(const FeatureVector& fv) {
  if (fv.values.empty()) return 0;
  if (fv.phrase == PhraseId::concatenated) {
    const std::size_t half = turkish_phrase().feature_count();
    std::span<const std::int64_t> all(fv.values);
    return phrase_total(all.first(half)) + phrase_total(all.subspan(half));
  }
  return phrase_total(fv.values);
}

}  // namespace keydyn
