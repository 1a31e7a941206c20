#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "keydyn/ingest/store.hpp"

namespace keydyn::ingest {

struct HttpReply {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Route logic, kept independent of the socket layer.
HttpReply post_session(Store& store, std::string_view body);
HttpReply get_progress(const Store& store, std::string_view subject_id);
HttpReply get_export(const Store& store, std::string_view phrase, bool deidentify);
HttpReply get_phrases();

/// Status code for a submit outcome: 200 accepted, 422 failed validation,
/// 400 malformed, 409 for conflicts with what is already stored.
int http_status(SubmitStatus s);

/// Serves:
///   POST /api/session
///   GET  /api/subject/{id}/progress
///   GET  /api/export?deidentify=1&phrase=turkish|password|concat
///   GET  /api/phrases
/// and, when a static directory is given, the capture page under /.
class IngestServer {
 public:
  explicit IngestServer(Store& store, std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~IngestServer();
  IngestServer(const IngestServer&) = delete;
  IngestServer& operator=(const IngestServer&) = delete;

  /// Binds to `port` (0 picks a free one) and returns the bound port.
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop().
  void serve();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace keydyn::ingest
