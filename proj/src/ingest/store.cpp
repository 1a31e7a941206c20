#include "keydyn/ingest/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>

#include "keydyn/core/features.hpp"
#include "keydyn/error.hpp"

namespace keydyn::ingest {

namespace fs = std::filesystem;

std::string_view to_string(SubmitStatus s) {
  switch (s) {
    case SubmitStatus::accepted: return "accepted";
    case SubmitStatus::rejected: return "rejected";
    case SubmitStatus::malformed_payload: return "malformed_payload";
    case SubmitStatus::subject_mismatch: return "subject_mismatch";
    case SubmitStatus::duplicate_session: return "duplicate_session";
    case SubmitStatus::quota_exceeded: return "quota_exceeded";
    case SubmitStatus::out_of_sequence: return "out_of_sequence";
  }
  return "unknown";
}

LabeledSample derive_sample(const RawSession& raw) {
  LabeledSample s;
  s.meta = raw.subject;
  s.session = raw.session_index;
  s.features = extract_features(raw.events, phrase_spec(raw.phrase));
  return s;
}

namespace {

constexpr std::string_view kRawLog = "raw.jsonl";

fs::path derived_path(const fs::path& dir, PhraseId p) { return dir / (std::string(to_string(p)) + ".csv"); }

[[noreturn]] void io_failure(const std::string& what, const fs::path& file) {
  throw Error(ErrorCode::io_error, what + " " + file.string() + ": " + std::strerror(errno));
}

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return {};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

void fsync_directory(const fs::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) io_failure("cannot open directory", dir);
  ::fsync(fd);
  ::close(fd);
}

void write_all(int fd, std::string_view text, const fs::path& file) {
  while (!text.empty()) {
    const auto n = ::write(fd, text.data(), text.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      io_failure("write failed on", file);
    }
    text.remove_prefix(static_cast<std::size_t>(n));
  }
}

void replace_file(const fs::path& file, std::string_view text) {
  const fs::path tmp = file.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) io_failure("cannot create", tmp);
  write_all(fd, text, tmp);
  if (::fsync(fd) != 0) io_failure("fsync failed on", tmp);
  ::close(fd);
  fs::rename(tmp, file);
  fsync_directory(file.parent_path());
}

std::string row_text(const LabeledSample& s, PhraseId phrase) {
  Dataset one;
  one.phrase = phrase;
  one.samples.push_back(s);
  const std::string csv = serialize_dataset_csv(one);
  return csv.substr(csv.find('\n') + 1);
}

}  // namespace

Store::Store(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot create store directory " + dir_.string() + ": " + ec.message());
  load();
}

void Store::load() {
  const fs::path raw_file = dir_ / kRawLog;
  std::string text = read_file(raw_file);
  // A line without its newline is a write that never completed.
  if (!text.empty() && text.back() != '\n') {
    text.resize(text.rfind('\n') == std::string::npos ? 0 : text.rfind('\n') + 1);
    fs::resize_file(raw_file, text.size());
    recovery_.truncated_raw_tail = true;
  }
  int line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    RawSession raw;
    try {
      raw = parse_raw_session(line);
    } catch (const Error& e) {
      throw Error(ErrorCode::io_error, dir_.string() + "/raw.jsonl line " + std::to_string(line_no) + ": " + e.detail());
    }
    LabeledSample sample = derive_sample(raw);
    const int id = raw.subject.subject_id;
    ++counts_[{id, raw.phrase}];
    subjects_.emplace(id, raw.subject);
    pseudonyms_.emplace(id, static_cast<int>(pseudonyms_.size()) + 1);
    entries_.push_back({std::move(raw), std::move(sample)});
  }
  for (auto p : {PhraseId::turkish, PhraseId::password}) rebuild_derived(p, derived_text(p));
}

std::string Store::derived_text(PhraseId phrase) const {
  std::string out = dataset_csv_header(phrase) + '\n';
  for (const auto& e : entries_) {
    if (e.raw.phrase == phrase) out += row_text(e.sample, phrase);
  }
  return out;
}

void Store::rebuild_derived(PhraseId phrase, const std::string& expected) {
  const fs::path file = derived_path(dir_, phrase);
  const std::string current = read_file(file);
  if (fs::exists(file) && current == expected) return;

  const auto have = split_lines(current);
  const auto want = split_lines(expected);
  std::map<std::string, int> balance;  // wanted minus present, per row text
  for (std::size_t i = 1; i < want.size(); ++i) ++balance[want[i]];
  for (std::size_t i = 1; i < have.size(); ++i) --balance[have[i]];
  for (const auto& [row, n] : balance) {
    if (n > 0) recovery_.derived_rows_added += n;
    if (n < 0) recovery_.derived_rows_dropped -= n;
  }
  replace_file(file, expected);
}

void Store::crash_point(CrashPoint p) const {
  if (crash_hook_) crash_hook_(p);
}

void Store::append_durably(const fs::path& file, std::string_view text, bool torn_hook) {
  const int fd = ::open(file.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
  if (fd < 0) io_failure("cannot open", file);
  try {
    if (torn_hook) {
      const auto half = text.size() / 2;
      write_all(fd, text.substr(0, half), file);
      crash_point(CrashPoint::torn_raw_line);
      text.remove_prefix(half);
    }
    write_all(fd, text, file);
    if (::fsync(fd) != 0) io_failure("fsync failed on", file);
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
}

SubmitResult Store::submit(std::string_view json_body) {
  RawSession raw;
  try {
    raw = parse_raw_session(json_body);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::malformed_payload) throw;
    return {SubmitStatus::malformed_payload, 0, "malformed_payload", e.detail()};
  }
  return submit(raw);
}

SubmitResult Store::submit(const RawSession& raw) {
  auto refuse = [](SubmitStatus s, int count, std::string detail) {
    return SubmitResult{s, count, std::string(to_string(s)), std::move(detail)};
  };
  if (raw.phrase == PhraseId::concatenated) {
    return refuse(SubmitStatus::malformed_payload, 0, "sessions are typed per phrase");
  }
  if (raw.session_index < 1) {
    return refuse(SubmitStatus::malformed_payload, 0, "session_index starts at 1");
  }

  std::unique_lock lock(mutex_);
  const int id = raw.subject.subject_id;
  const auto known = subjects_.find(id);
  if (known != subjects_.end() && !(known->second == raw.subject)) {
    return refuse(SubmitStatus::subject_mismatch, 0,
                  "subject " + std::to_string(id) + " is stored with different metadata");
  }
  const auto count_it = counts_.find({id, raw.phrase});
  const int count = count_it == counts_.end() ? 0 : count_it->second;
  if (raw.session_index <= count) {
    return refuse(SubmitStatus::duplicate_session, count,
                  "session " + std::to_string(raw.session_index) + " is already stored");
  }
  if (raw.session_index > kSessionsPerPhrase) {
    return refuse(SubmitStatus::quota_exceeded, count,
                  "at most " + std::to_string(kSessionsPerPhrase) + " sessions per phrase");
  }
  if (raw.session_index != count + 1) {
    return refuse(SubmitStatus::out_of_sequence, count, "next session is " + std::to_string(count + 1));
  }

  const auto verdict = validate_session(raw.events, phrase_spec(raw.phrase));
  if (const auto* r = std::get_if<Rejected>(&verdict)) {
    return {SubmitStatus::rejected, count, std::string(to_string(r->reason)), r->detail};
  }

  LabeledSample sample = derive_sample(raw);
  append_durably(dir_ / kRawLog, to_json(raw).dump() + '\n', true);
  crash_point(CrashPoint::after_raw_append);
  append_durably(derived_path(dir_, raw.phrase), row_text(sample, raw.phrase), false);
  crash_point(CrashPoint::after_derived_append);

  counts_[{id, raw.phrase}] = count + 1;
  subjects_.emplace(id, raw.subject);
  pseudonyms_.emplace(id, static_cast<int>(pseudonyms_.size()) + 1);
  entries_.push_back({raw, std::move(sample)});
  return {SubmitStatus::accepted, count + 1, "accepted", {}};
}

int Store::progress(int subject_id, PhraseId phrase) const {
  std::shared_lock lock(mutex_);
  const auto it = counts_.find({subject_id, phrase});
  return it == counts_.end() ? 0 : it->second;
}

bool Store::has_subject(int subject_id) const {
  std::shared_lock lock(mutex_);
  return subjects_.contains(subject_id);
}

std::size_t Store::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::vector<RawSession> Store::raw_sessions() const {
  std::shared_lock lock(mutex_);
  std::vector<RawSession> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.raw);
  return out;
}

Dataset Store::dataset_unlocked(PhraseId phrase) const {
  if (phrase == PhraseId::concatenated) {
    return concat_datasets(dataset_unlocked(PhraseId::turkish), dataset_unlocked(PhraseId::password));
  }
  Dataset d;
  d.phrase = phrase;
  for (const auto& e : entries_) {
    if (e.raw.phrase == phrase) d.samples.push_back(e.sample);
  }
  return d;
}

Dataset Store::dataset(PhraseId phrase) const {
  std::shared_lock lock(mutex_);
  return dataset_unlocked(phrase);
}

std::string Store::export_csv(PhraseId phrase, bool deidentify) const {
  std::shared_lock lock(mutex_);
  Dataset d = dataset_unlocked(phrase);
  if (d.empty()) throw Error(ErrorCode::empty_store, "no " + std::string(to_string(phrase)) + " sessions stored");
  if (deidentify) {
    for (auto& s : d.samples) {
      s.meta.subject_id = pseudonyms_.at(s.meta.subject_id);
      s.meta.birth_year = 0;
      s.meta.survey.reset();
    }
  }
  return serialize_dataset_csv(d);
}

}  // namespace keydyn::ingest
