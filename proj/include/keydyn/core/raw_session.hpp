#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "keydyn/core/dataset.hpp"
#include "keydyn/core/keys.hpp"

namespace keydyn {

/// A captured typing session as submitted by a client:
/// {subject:{...}, phrase_id, session_index, events:[{key, kind:"down"|"up", t_us}]}
struct RawSession {
  SubjectMeta subject;
  PhraseId phrase = PhraseId::turkish;
  int session_index = 1;
  std::vector<KeyEvent> events;
  std::optional<std::string> clock_resolution;

  friend bool operator==(const RawSession&, const RawSession&) = default;
};

/// Throws malformed_payload on schema violations.
RawSession raw_session_from_json(const nlohmann::json& j);
RawSession parse_raw_session(std::string_view text);
nlohmann::json to_json(const RawSession& s);
nlohmann::json to_json(const SubjectMeta& m);

}  // namespace keydyn
