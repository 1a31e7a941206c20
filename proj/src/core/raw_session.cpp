#include "keydyn/core/raw_session.hpp"

#include "keydyn/error.hpp"

namespace keydyn {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& why) {
  throw Error(ErrorCode::malformed_payload, why);
}

const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) malformed(std::string("missing field '") + name + "'");
  return *it;
}

template <typename T>
T integer_field(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_number_integer()) malformed(std::string("field '") + name + "' must be an integer");
  return v.get<T>();
}

std::string string_field(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_string()) malformed(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

SubjectMeta subject_from_json(const json& j) {
  if (!j.is_object()) malformed("subject must be an object");
  SubjectMeta m;
  m.subject_id = integer_field<int>(j, "subject_id");
  const auto gender = string_field(j, "gender");
  if (gender == "M") {
    m.gender = Gender::male;
  } else if (gender == "F") {
    m.gender = Gender::female;
  } else {
    malformed("gender must be M or F");
  }
  auto group = parse_age_group(string_field(j, "age_group"));
  if (!group) malformed("age_group must be child, adult or impostor");
  m.age_group = *group;
  m.birth_year = integer_field<int>(j, "birth_year");
  if (auto it = j.find("survey"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) malformed("survey must be an object");
    Survey s;
    s.handedness = it->value("handedness", "");
    s.owns_computer = it->value("owns_computer", false);
    s.years_of_use = it->value("years_of_use", "");
    s.daily_hours = it->value("daily_hours", "");
    s.words_per_day = it->value("words_per_day", "");
    m.survey = s;
  }
  return m;
}

}  // namespace

RawSession raw_session_from_json(const json& j) {
  if (!j.is_object()) malformed("session must be a JSON object");
  RawSession s;
  s.subject = subject_from_json(field(j, "subject"));
  auto phrase = parse_phrase_id(string_field(j, "phrase_id"));
  if (!phrase || *phrase == PhraseId::concatenated) malformed("phrase_id must be turkish or password");
  s.phrase = *phrase;
  s.session_index = integer_field<int>(j, "session_index");
  if (auto it = j.find("clock_resolution"); it != j.end() && it->is_string()) {
    s.clock_resolution = it->get<std::string>();
  }
  const auto& events = field(j, "events");
  if (!events.is_array()) malformed("events must be an array");
  s.events.reserve(events.size());
  for (const auto& e : events) {
    if (!e.is_object()) malformed("event must be an object");
    KeyEvent ev;
    ev.key = string_field(e, "key");
    const auto kind = string_field(e, "kind");
    if (kind == "down") {
      ev.kind = KeyKind::press;
    } else if (kind == "up") {
      ev.kind = KeyKind::release;
    } else {
      malformed("event kind must be down or up");
    }
    ev.t_us = integer_field<std::int64_t>(e, "t_us");
    if (ev.t_us < 0) malformed("t_us must be non-negative");
    s.events.push_back(std::move(ev));
  }
  return s;
}

RawSession parse_raw_session(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) malformed("invalid JSON");
  return raw_session_from_json(j);
}

json to_json(const SubjectMeta& m) {
  json j = {
      {"subject_id", m.subject_id},
      {"gender", m.gender == Gender::male ? "M" : "F"},
      {"age_group", std::string(to_string(m.age_group))},
      {"birth_year", m.birth_year},
  };
  if (m.survey) {
    j["survey"] = {
        {"handedness", m.survey->handedness},
        {"owns_computer", m.survey->owns_computer},
        {"years_of_use", m.survey->years_of_use},
        {"daily_hours", m.survey->daily_hours},
        {"words_per_day", m.survey->words_per_day},
    };
  }
  return j;
}

json to_json(const RawSession& s) {
  json events = json::array();
  for (const auto& e : s.events) {
    events.push_back({{"key", e.key},
                      {"kind", e.kind == KeyKind::press ? "down" : "up"},
                      {"t_us", e.t_us}});
  }
  json j = {
      {"subject", to_json(s.subject)},
      {"phrase_id", std::string(to_string(s.phrase))},
      {"session_index", s.session_index},
      {"events", std::move(events)},
  };
  if (s.clock_resolution) j["clock_resolution"] = *s.clock_resolution;
  return j;
}

}  // namespace keydyn
