#pragma once

// Test-only generator of well-formed raw typing streams.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <random>
#include <vector>

#include "keydyn/core/keys.hpp"

namespace keydyn::testing {

struct StreamOptions {
  bool shift_for_capitals = true;
  bool allow_overlap = true;
  bool sprinkle_modifiers = false;
};

inline std::vector<KeyEvent> random_stream(const PhraseSpec& spec, std::mt19937_64& rng,
                                           const StreamOptions& opt = {}) {
  std::uniform_int_distribution<std::int64_t> start(1'000, 5'000'000);
  std::uniform_int_distribution<std::int64_t> hold(20'000, 250'000);
  std::uniform_int_distribution<std::int64_t> gap(1'000, 600'000);
  std::uniform_int_distribution<std::int64_t> overlap(1, 60'000);
  std::bernoulli_distribution coin(0.25);

  struct Timed {
    KeyEvent e;
    int order;
  };
  std::vector<Timed> out;
  int order = 0;
  auto emit = [&](const std::string& key, KeyKind kind, std::int64_t t) {
    out.push_back({KeyEvent{key, kind, t}, order++});
  };

  std::int64_t press = start(rng);
  std::int64_t prev_release = -1;
  for (std::size_t i = 0; i < spec.key_tokens.size(); ++i) {
    const auto& key = spec.key_tokens[i];
    if (i > 0) {
      // Next press after the previous one; sometimes before its release.
      if (opt.allow_overlap && coin(rng)) {
        press = std::max(press + 1, prev_release - overlap(rng));
      } else {
        press = prev_release + gap(rng);
      }
    }
    const std::int64_t release = press + hold(rng);
    const bool capital = key.size() == 1 && std::isupper(static_cast<unsigned char>(key[0]));
    if (capital && opt.shift_for_capitals) {
      emit("Shift", KeyKind::press, press - 1);
      emit("Shift", KeyKind::release, release + 1);
    }
    if (opt.sprinkle_modifiers && coin(rng)) {
      emit("CapsLock", KeyKind::press, press);
      emit("CapsLock", KeyKind::release, press);
    }
    emit(key, KeyKind::press, press);
    emit(key, KeyKind::release, release);
    // Keep a key's release before the following press of the same key.
    prev_release = release;
  }
  std::stable_sort(out.begin(), out.end(), [](const Timed& a, const Timed& b) {
    return a.e.t_us < b.e.t_us;
  });
  std::vector<KeyEvent> events;
  events.reserve(out.size());
  for (auto& t : out) events.push_back(std::move(t.e));
  return events;
}

}  // namespace keydyn::testing
