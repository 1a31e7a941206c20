#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "keydyn/core/dataset.hpp"
#include "keydyn/core/raw_session.hpp"

namespace keydyn {

/// Per-subject typing habits in microseconds.
struct TypistProfile {
  double hold_mean = 100'000;
  double interval_mean = 200'000;  // press to next press
  double jitter = 0.15;            // within-subject relative spread
  double pause_probability = 0;    // chance of an extra hesitation before a key
  double pause_mean = 0;
};

/// Adults are fast and homogeneous; children are slower with a wide spread
/// between and within subjects. Impostors are adults deliberately slowing
/// down: child-like intervals on adult hands.
TypistProfile draw_profile(AgeGroup group, std::mt19937_64& rng);

/// Press/release stream for one phrase, Shift wrapped around capitals.
/// Every stream passes validate_session.
std::vector<KeyEvent> synthesize_events(const PhraseSpec& spec, const TypistProfile& profile,
                                        std::mt19937_64& rng);

struct SynthOptions {
  int subjects = 100;  // alternating adult, child
  int sessions = 5;
  int first_id = 1;
  std::uint64_t seed = 0;
  bool impostors = false;  // every subject is an impostor
};

struct Population {
  std::vector<RawSession> sessions;  // Turkish then Password, per subject and session
  Dataset turkish;
  Dataset password;
};

Population synthesize_population(const SynthOptions& options);

}  // namespace keydyn
