#include "keydyn/synth/population.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "keydyn/core/features.hpp"

namespace keydyn {

namespace {

double positive_normal(std::mt19937_64& rng, double mean, double sd, double floor) {
  std::normal_distribution<double> g(mean, sd);
  return std::max(floor, g(rng));
}

/// Fixed per-digraph difficulty, shared by every typist.
double digraph_factor(std::size_t position) {
  static constexpr double kFactors[] = {1.0, 0.85, 1.2, 0.95, 1.1, 0.8, 1.35, 1.0, 0.9, 1.15, 1.05};
  return kFactors[position % std::size(kFactors)];
}

bool needs_shift(const std::string& token) {
  return token.size() == 1 && std::isupper(static_cast<unsigned char>(token[0]));
}

}  // namespace

TypistProfile draw_profile(AgeGroup group, std::mt19937_64& rng) {
  TypistProfile p;
  switch (group) {
    case AgeGroup::adult:
      p.hold_mean = positive_normal(rng, 90'000, 10'000, 50'000);
      p.interval_mean = positive_normal(rng, 180'000, 30'000, 110'000);
      p.jitter = positive_normal(rng, 0.12, 0.03, 0.05);
      p.pause_probability = 0.02;
      p.pause_mean = 150'000;
      break;
    case AgeGroup::child:
      p.hold_mean = positive_normal(rng, 135'000, 30'000, 70'000);
      p.interval_mean = positive_normal(rng, 460'000, 130'000, 240'000);
      p.jitter = positive_normal(rng, 0.35, 0.08, 0.1);
      p.pause_probability = 0.12;
      p.pause_mean = 500'000;
      break;
    case AgeGroup::impostor:
      p.hold_mean = positive_normal(rng, 100'000, 15'000, 50'000);
      p.interval_mean = positive_normal(rng, 380'000, 120'000, 150'000);
      p.jitter = positive_normal(rng, 0.3, 0.08, 0.1);
      p.pause_probability = 0.15;
      p.pause_mean = 600'000;
      break;
  }
  return p;
}

std::vector<KeyEvent> synthesize_events(const PhraseSpec& spec, const TypistProfile& profile,
                                        std::mt19937_64& rng) {
  std::normal_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> pause(1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<KeyEvent> events;
  auto t = static_cast<std::int64_t>(100'000 + 50'000 * coin(rng));
  std::int64_t previous_release = 0;
  for (std::size_t i = 0; i < spec.key_tokens.size(); ++i) {
    const std::string& key = spec.key_tokens[i];
    if (i > 0) {
      double interval = profile.interval_mean * digraph_factor(i) * (1 + profile.jitter * unit(rng));
      if (coin(rng) < profile.pause_probability) interval += profile.pause_mean * pause(rng);
      t += static_cast<std::int64_t>(std::max(30'000.0, interval));
    }
    const auto hold = static_cast<std::int64_t>(
        std::max(25'000.0, profile.hold_mean * (1 + profile.jitter * unit(rng))));
    if (i > 0 && key == spec.key_tokens[i - 1]) t = std::max(t, previous_release + 1);
    if (needs_shift(key)) {
      events.push_back({"Shift", KeyKind::press, t - 60'000});
      events.push_back({"Shift", KeyKind::release, t + hold + 20'000});
    }
    events.push_back({key, KeyKind::press, t});
    events.push_back({key, KeyKind::release, t + hold});
    previous_release = t + hold;
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const KeyEvent& a, const KeyEvent& b) { return a.t_us < b.t_us; });
  for (std::size_t i = 1; i < events.size(); ++i) {
    events[i].t_us = std::max(events[i].t_us, events[i - 1].t_us + 1);
  }
  return events;
}

Population synthesize_population(const SynthOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> adult_year(1965, 1994);
  std::uniform_int_distribution<int> child_year(2002, 2006);

  Population pop;
  pop.turkish.phrase = PhraseId::turkish;
  pop.password.phrase = PhraseId::password;
  for (int s = 0; s < options.subjects; ++s) {
    SubjectMeta meta;
    meta.subject_id = options.first_id + s;
    meta.age_group = options.impostors ? AgeGroup::impostor : (s % 2 == 0 ? AgeGroup::adult : AgeGroup::child);
    meta.gender = (s / 2) % 2 == 0 ? Gender::female : Gender::male;
    meta.birth_year = meta.age_group == AgeGroup::child ? child_year(rng) : adult_year(rng);
    const TypistProfile profile = draw_profile(meta.age_group, rng);

    for (int k = 1; k <= options.sessions; ++k) {
      for (auto phrase : {PhraseId::turkish, PhraseId::password}) {
        const auto& spec = phrase_spec(phrase);
        RawSession raw;
        raw.subject = meta;
        raw.phrase = phrase;
        raw.session_index = k;
        raw.events = synthesize_events(spec, profile, rng);
        raw.clock_resolution = "synthetic, 1 us";

        LabeledSample sample;
        sample.meta = meta;
        sample.session = k;
        sample.features = extract_features(raw.events, spec);
        (phrase == PhraseId::turkish ? pop.turkish : pop.password).samples.push_back(std::move(sample));
        pop.sessions.push_back(std::move(raw));
      }
    }
  }
  return pop;
}

}  // namespace keydyn
