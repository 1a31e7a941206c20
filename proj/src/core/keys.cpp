#include "keydyn/core/keys.hpp"

#include <array>
#include <utility>

#include "keydyn/error.hpp"

namespace keydyn {

std::string_view to_string(PhraseId id) {
  switch (id) {
    case PhraseId::turkish: return "turkish";
    case PhraseId::password: return "password";
    case PhraseId::concatenated: return "concat";
  }
  return "unknown";
}

std::optional<PhraseId> parse_phrase_id(std::string_view s) {
  if (s == "turkish") return PhraseId::turkish;
  if (s == "password") return PhraseId::password;
  if (s == "concat") return PhraseId::concatenated;
  return std::nullopt;
}

namespace {

constexpr std::array<std::pair<char, std::string_view>, 33> kNamedKeys{{
    {' ', "space"},     {'.', "period"},   {',', "comma"},     {'0', "zero"},
    {'1', "one"},       {'2', "two"},      {'3', "three"},     {'4', "four"},
    {'5', "five"},      {'6', "six"},      {'7', "seven"},     {'8', "eight"},
    {'9', "nine"},      {'-', "minus"},    {'=', "equal"},     {';', "semicolon"},
    {'\'', "quote"},    {'/', "slash"},    {'\\', "backslash"}, {'[', "bracketleft"},
    {']', "bracketright"}, {'`', "backquote"}, {'!', "exclam"}, {'?', "question"},
    {':', "colon"},     {'"', "quotedbl"}, {'(', "parenleft"}, {')', "parenright"},
    {'@', "at"},        {'#', "numbersign"}, {'*', "asterisk"}, {'+', "plus"},
    {'_', "underscore"},
}};

bool is_ascii_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

}  // namespace

bool is_modifier(std::string_view token) {
  return token == "Shift" || token == "ShiftLeft" || token == "ShiftRight" ||
         token == "CapsLock" || token == "Control" || token == "Alt" || token == "AltGraph" ||
         token == "Meta";
}

bool is_deletion(std::string_view token) { return token == "Backspace" || token == "Delete"; }

std::optional<char> token_char(std::string_view token) {
  if (token.size() == 1 && is_ascii_letter(token[0])) return token[0];
  for (const auto& [c, name] : kNamedKeys) {
    if (name == token) return c;
  }
  return std::nullopt;
}

std::optional<std::string> char_token(char c) {
  if (is_ascii_letter(c)) return std::string(1, c);
  for (const auto& [ch, name] : kNamedKeys) {
    if (ch == c) return std::string(name);
  }
  return std::nullopt;
}

PhraseSpec make_phrase_spec(PhraseId id, std::string_view text) {
  PhraseSpec spec;
  spec.id = id;
  spec.text = std::string(text);
  for (char c : text) {
    auto token = char_token(c);
    if (!token) {
      throw Error(ErrorCode::invalid_argument,
                  std::string("no key token for character '") + c + "'");
    }
    spec.key_tokens.push_back(*token);
  }
  spec.key_tokens.emplace_back(kEnter);
  return spec;
}

const PhraseSpec& turkish_phrase() {
  static const PhraseSpec spec = make_phrase_spec(PhraseId::turkish, "Mercan Otu");
  return spec;
}

const PhraseSpec& password_phrase() {
  static const PhraseSpec spec = make_phrase_spec(PhraseId::password, ".tie5Roanl");
  return spec;
}

const PhraseSpec& phrase_spec(PhraseId id) {
  switch (id) {
    case PhraseId::turkish: return turkish_phrase();
    case PhraseId::password: return password_phrase();
    case PhraseId::concatenated: break;
  }
  throw Error(ErrorCode::invalid_argument, "concatenated layout has no single phrase");
}

}  // namespace keydyn
