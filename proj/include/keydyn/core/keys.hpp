#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace keydyn {

enum class KeyKind { press, release };

/// One press or release of a named key. Timestamps are integer microseconds
/// on a monotonic clock.
struct KeyEvent {
  std::string key;
  KeyKind kind = KeyKind::press;
  std::int64_t t_us = 0;

  friend bool operator==(const KeyEvent&, const KeyEvent&) = default;
};

enum class PhraseId { turkish, password, concatenated };

std::string_view to_string(PhraseId id);
std::optional<PhraseId> parse_phrase_id(std::string_view s);

/// A fixed phrase and the ordered key tokens whose timings are measured
/// (one per character plus the terminating Enter).
struct PhraseSpec {
  PhraseId id = PhraseId::turkish;
  std::string text;
  std::vector<std::string> key_tokens;

  std::size_t typed_chars() const { return text.size(); }
  std::size_t feature_count() const { return 3 * typed_chars() + 1; }
};

const PhraseSpec& turkish_phrase();
const PhraseSpec& password_phrase();
const PhraseSpec& phrase_spec(PhraseId id);

/// Builds a spec for an arbitrary printable phrase. Throws invalid_argument
/// when a character has no key token.
PhraseSpec make_phrase_spec(PhraseId id, std::string_view text);

// Key token vocabulary. Printable keys use the character itself for letters
// and a name otherwise ("space", "period", "five", ...).
inline constexpr std::string_view kEnter = "Enter";

bool is_modifier(std::string_view token);
bool is_deletion(std::string_view token);

/// Character produced by pressing `token`, if it is a printable key.
std::optional<char> token_char(std::string_view token);
/// Token that produces `c`, if any.
std::optional<std::string> char_token(char c);

}  // namespace keydyn
