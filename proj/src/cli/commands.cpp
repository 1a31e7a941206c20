#include "keydyn/cli/commands.hpp"

#include <pthread.h>
#include <signal.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "keydyn/core/features.hpp"
#include "keydyn/core/raw_session.hpp"
#include "keydyn/error.hpp"
#include "keydyn/ingest/server.hpp"
#include "keydyn/synth/population.hpp"

namespace keydyn::cli {

namespace fs = std::filesystem;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::malformed_session:
    case ErrorCode::malformed_payload:
    case ErrorCode::mismatched_subject_or_session:
    case ErrorCode::bad_header:
    case ErrorCode::bad_row:
    case ErrorCode::duplicate_key:
    case ErrorCode::dimension_mismatch: return kExitParse;
    case ErrorCode::missing_class:
    case ErrorCode::one_class_only:
    case ErrorCode::empty_group:
    case ErrorCode::too_few_subjects: return kExitMissingClass;
    case ErrorCode::io_error: return kExitIo;
    case ErrorCode::empty_store: return kExitEmpty;
    default: return kExitUsage;
  }
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("KEYDYN_SEED"); env && *env) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw Error(ErrorCode::invalid_argument, "KEYDYN_SEED is not an unsigned integer");
    return v;
  }
  return 0;
}

void write_file_atomically(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::io_error, "cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw Error(ErrorCode::io_error, "write failed on " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::io_error, "cannot move output into place at " + path.string());
  }
}

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::optional<fs::path>& output, const std::string& text, std::ostream& out) {
  if (output) {
    write_file_atomically(*output, text);
  } else {
    out << text;
  }
}

// Runs `body`, translating library errors into exit codes with a message.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "keydyn: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "keydyn: " << e.what() << '\n';
    return kExitIo;
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Source {
  std::string label;
  std::string text;
};

std::vector<Source> collect_sessions(const fs::path& input) {
  std::vector<Source> out;
  if (fs::is_directory(input)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(input)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) out.push_back({f.filename().string(), read_text(f)});
  } else if (fs::is_regular_file(input)) {
    std::istringstream lines(read_text(input));
    int n = 0;
    for (std::string line; std::getline(lines, line);) {
      ++n;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      out.push_back({input.filename().string() + ":" + std::to_string(n), line});
    }
  } else {
    throw Error(ErrorCode::io_error, input.string() + " is neither a directory nor a file");
  }
  return out;
}

using DatasetMap = std::map<PhraseId, Dataset>;

void add_samples(DatasetMap& into, Dataset d) {
  auto [it, fresh] = into.try_emplace(d.phrase, d);
  if (!fresh) {
    for (auto& s : d.samples) it->second.samples.push_back(std::move(s));
  }
  check_dataset(it->second);
}

DatasetMap load_datasets(const std::vector<fs::path>& files) {
  DatasetMap out;
  for (const auto& f : files) {
    try {
      add_samples(out, parse_dataset_csv(read_text(f)));
    } catch (const Error& e) {
      throw Error(e.code(), f.string() + ": " + e.detail());
    }
  }
  if (!out.contains(PhraseId::concatenated) && out.contains(PhraseId::turkish) && out.contains(PhraseId::password)) {
    auto joined = concat_datasets(out.at(PhraseId::turkish), out.at(PhraseId::password));
    if (!joined.empty()) out.emplace(PhraseId::concatenated, std::move(joined));
  }
  return out;
}

}  // namespace

int cmd_featurize(const FeaturizeArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto sources = collect_sessions(args.input);
    DatasetMap accepted;
    accepted[PhraseId::turkish].phrase = PhraseId::turkish;
    accepted[PhraseId::password].phrase = PhraseId::password;
    std::set<std::tuple<int, int, PhraseId>> seen;
    std::string log;
    std::size_t n_accepted = 0, n_rejected = 0;

    auto reject = [&](const Source& src, std::string_view reason, const std::string& detail) {
      log += src.label + '\t' + std::string(reason) + '\t' + detail + '\n';
      ++n_rejected;
    };

    for (const auto& src : sources) {
      RawSession raw;
      try {
        raw = parse_raw_session(src.text);
      } catch (const Error& e) {
        reject(src, to_string(e.code()), e.detail());
        continue;
      }
      if (raw.phrase == PhraseId::concatenated) {
        reject(src, "malformed_payload", "sessions are typed per phrase");
        continue;
      }
      const auto& spec = phrase_spec(raw.phrase);
      const auto verdict = validate_session(raw.events, spec);
      if (const auto* r = std::get_if<Rejected>(&verdict)) {
        reject(src, to_string(r->reason), r->detail);
        continue;
      }
      if (!seen.emplace(raw.subject.subject_id, raw.session_index, raw.phrase).second) {
        reject(src, "duplicate_session",
               "subject " + std::to_string(raw.subject.subject_id) + " session " +
                   std::to_string(raw.session_index) + " already featurized");
        continue;
      }
      LabeledSample s;
      s.meta = raw.subject;
      s.session = raw.session_index;
      s.features = extract_features(raw.events, spec);
      accepted[raw.phrase].samples.push_back(std::move(s));
      ++n_accepted;
    }

    fs::create_directories(args.out_dir);
    write_file_atomically(args.out_dir / "rejects.log", log);
    out << "accepted " << n_accepted << ", rejected " << n_rejected << '\n';
    if (n_accepted == 0) {
      err << "keydyn: no session was accepted; see " << (args.out_dir / "rejects.log").string() << '\n';
      return kExitEmpty;
    }
    const Dataset& turkish = accepted[PhraseId::turkish];
    const Dataset& password = accepted[PhraseId::password];
    const auto concat = concat_datasets(turkish, password);
    for (const Dataset* d : {&turkish, &password, &concat}) {
      if (d->empty()) continue;
      const auto file = args.out_dir / (std::string(to_string(d->phrase)) + ".csv");
      write_file_atomically(file, serialize_dataset_csv(*d));
      out << "wrote " << file.string() << " (" << d->size() << " rows)\n";
    }
    return kExitOk;
  });
}

int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    // Selectors are checked before any file is read.
    std::vector<Algorithm> algorithms;
    if (args.algo == "all") {
      algorithms.assign(all_algorithms().begin(), all_algorithms().end());
    } else {
      for (const auto& name : split_list(args.algo)) {
        const auto a = parse_algorithm(name);
        if (!a) throw Error(ErrorCode::unknown_algorithm, "'" + name + "'");
        algorithms.push_back(*a);
      }
    }
    if (algorithms.empty()) throw Error(ErrorCode::invalid_argument, "no algorithm selected");
    std::vector<PhraseId> wanted;
    if (args.dataset != "all") {
      for (const auto& name : split_list(args.dataset)) {
        const auto p = parse_phrase_id(name);
        if (!p) throw Error(ErrorCode::invalid_argument, "unknown dataset '" + name + "'");
        wanted.push_back(*p);
      }
    }
    if (args.format != "text" && args.format != "csv") {
      throw Error(ErrorCode::invalid_argument, "format must be text or csv");
    }
    if (args.data.empty()) throw Error(ErrorCode::invalid_argument, "no --data file given");

    const auto data = load_datasets(args.data);
    const auto impostors = load_datasets(args.impostors);
    if (args.dataset == "all") {
      for (const auto& [phrase, d] : data) {
        if (args.impostors.empty() || impostors.contains(phrase)) wanted.push_back(phrase);
      }
    }

    EvalOptions options;
    options.config = args.config;
    options.seed = resolve_seed(args.seed);
    options.folds = args.folds;
    options.jobs = std::max(1, args.jobs);
    options.fold_average = args.fold_average;
    const auto report = evaluate(data, impostors, algorithms, wanted, options);
    emit(args.output, args.format == "csv" ? render_csv(report) : render_text(report), out);
    return kExitOk;
  });
}

int cmd_stats(const StatsArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto d = parse_dataset_csv(read_text(args.data));
    emit(args.output, stats_csv(dataset_stats(d)), out);
    return kExitOk;
  });
}

int cmd_export(const ExportArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto phrase = parse_phrase_id(args.phrase);
    if (!phrase) throw Error(ErrorCode::invalid_argument, "unknown phrase '" + args.phrase + "'");
    if (!fs::is_directory(args.store)) throw Error(ErrorCode::io_error, "no store at " + args.store.string());
    const ingest::Store store(args.store);
    emit(args.output, store.export_csv(*phrase, args.deidentify), out);
    return kExitOk;
  });
}

int cmd_synth(const SynthArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.subjects < 1 || args.sessions < 1) {
      throw Error(ErrorCode::invalid_argument, "subjects and sessions must be positive");
    }
    SynthOptions opts;
    opts.subjects = args.subjects;
    opts.sessions = args.sessions;
    opts.first_id = args.first_id;
    opts.impostors = args.impostors;
    opts.seed = resolve_seed(args.seed);
    const auto pop = synthesize_population(opts);

    fs::create_directories(args.out_dir);
    const auto concat = concat_datasets(pop.turkish, pop.password);
    for (const Dataset* d : {&pop.turkish, &pop.password, &concat}) {
      write_file_atomically(args.out_dir / (std::string(to_string(d->phrase)) + ".csv"), serialize_dataset_csv(*d));
    }
    if (args.raw) {
      std::string lines;
      for (const auto& s : pop.sessions) lines += to_json(s).dump() + '\n';
      write_file_atomically(args.out_dir / "raw.jsonl", lines);
    }
    out << "wrote " << pop.turkish.size() << " sessions per phrase to " << args.out_dir.string() << '\n';
    return kExitOk;
  });
}

int cmd_serve(const ServeArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ingest::Store store(args.store);
    const auto& rec = store.recovery();
    if (rec.truncated_raw_tail || rec.derived_rows_added || rec.derived_rows_dropped) {
      err << "keydyn: recovered store (torn tail " << rec.truncated_raw_tail << ", rows added "
          << rec.derived_rows_added << ", rows dropped " << rec.derived_rows_dropped << ")\n";
    }
    ingest::IngestServer server(store, args.static_dir);
    const int port = server.bind(args.host, args.port);

    // Signals are taken synchronously by a watcher thread; the server's
    // worker threads inherit the blocked mask.
    sigset_t stop_signals;
    sigemptyset(&stop_signals);
    sigaddset(&stop_signals, SIGINT);
    sigaddset(&stop_signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);
    std::atomic<bool> signalled{false};
    std::jthread watcher([&] {
      int sig = 0;
      sigwait(&stop_signals, &sig);
      signalled = true;
      server.stop();
    });

    out << "serving " << store.size() << " stored sessions on http://" << args.host << ':' << port << '\n'
        << std::flush;
    server.serve();
    if (!signalled) {
      ::kill(::getpid(), SIGTERM);  // release the watcher if the server stopped on its own
    }
    return kExitOk;
  });
}

}  // namespace keydyn::cli
