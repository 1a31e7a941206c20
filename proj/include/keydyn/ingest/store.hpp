#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "keydyn/core/dataset.hpp"
#include "keydyn/core/raw_session.hpp"

namespace keydyn::ingest {

inline constexpr int kSessionsPerPhrase = 5;

enum class SubmitStatus {
  accepted,
  rejected,           // failed validate_session; `reason` is the core reject reason
  malformed_payload,
  subject_mismatch,   // subject id already stored with different metadata
  duplicate_session,
  quota_exceeded,
  out_of_sequence,    // session_index skips ahead of the stored count
};

std::string_view to_string(SubmitStatus s);

struct SubmitResult {
  SubmitStatus status = SubmitStatus::accepted;
  int session_count = 0;  // accepted sessions for (subject, phrase) after this call
  std::string reason;     // machine-readable, equals to_string(status) unless rejected
  std::string detail;
};

/// Points in the write path where a test can abort the process image.
enum class CrashPoint { torn_raw_line, after_raw_append, after_derived_append };

/// What opening a store had to repair.
struct Recovery {
  bool truncated_raw_tail = false;
  int derived_rows_added = 0;
  int derived_rows_dropped = 0;
};

/// Append-only session store in a directory:
///   raw.jsonl     one accepted raw session per line, the source of truth
///   turkish.csv   derived feature rows, canonical dataset CSV
///   password.csv
/// Raw lines are written and synced before their derived row, so after a crash
/// the derived files can only lag the log, never lead it. Opening a store
/// rebuilds the derived files from the log whenever they disagree.
class Store {
 public:
  explicit Store(std::filesystem::path dir);

  SubmitResult submit(std::string_view json_body);
  SubmitResult submit(const RawSession& session);

  int progress(int subject_id, PhraseId phrase) const;
  bool has_subject(int subject_id) const;

  /// Snapshot of the derived rows for one phrase (concatenated joins both).
  Dataset dataset(PhraseId phrase) const;
  std::vector<RawSession> raw_sessions() const;
  std::size_t size() const;

  /// Canonical dataset CSV. De-identified exports replace subject ids by their
  /// order of first acceptance and zero the birth year. Throws empty_store
  /// when there is nothing to export for the phrase.
  std::string export_csv(PhraseId phrase, bool deidentify) const;

  const Recovery& recovery() const { return recovery_; }
  const std::filesystem::path& directory() const { return dir_; }

  /// Called at each CrashPoint during an accepted submit. Throwing from the
  /// hook abandons the write with whatever reached disk so far.
  void set_crash_hook(std::function<void(CrashPoint)> hook) { crash_hook_ = std::move(hook); }

 private:
  struct Entry {
    RawSession raw;
    LabeledSample sample;
  };

  void load();
  Dataset dataset_unlocked(PhraseId phrase) const;
  void rebuild_derived(PhraseId phrase, const std::string& expected);
  std::string derived_text(PhraseId phrase) const;
  void append_durably(const std::filesystem::path& file, std::string_view text, bool torn_hook);
  void crash_point(CrashPoint p) const;

  std::filesystem::path dir_;
  mutable std::shared_mutex mutex_;
  std::vector<Entry> entries_;
  std::map<std::pair<int, PhraseId>, int> counts_;
  std::map<int, SubjectMeta> subjects_;
  std::map<int, int> pseudonyms_;
  Recovery recovery_;
  std::function<void(CrashPoint)> crash_hook_;
};

/// Features re-derived from a stored raw session; equals the stored row.
LabeledSample derive_sample(const RawSession& raw);

}  // namespace keydyn::ingest
