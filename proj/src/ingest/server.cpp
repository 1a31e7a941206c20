#include "keydyn/ingest/server.hpp"

#include <charconv>

#include "keydyn/error.hpp"

// Last: <resolv.h> defines a `_res` macro that collides with Eigen parameter names.
#include "httplib.h"

namespace keydyn::ingest {

using nlohmann::json;

namespace {

HttpReply json_reply(int status, const json& body) { return {status, "application/json", body.dump()}; }

HttpReply error_reply(int status, std::string_view code, const std::string& detail) {
  return json_reply(status, {{"error", code}, {"detail", detail}});
}

}  // namespace

int http_status(SubmitStatus s) {
  switch (s) {
    case SubmitStatus::accepted: return 200;
    case SubmitStatus::rejected: return 422;
    case SubmitStatus::malformed_payload: return 400;
    case SubmitStatus::subject_mismatch:
    case SubmitStatus::duplicate_session:
    case SubmitStatus::quota_exceeded:
    case SubmitStatus::out_of_sequence: return 409;
  }
  return 500;
}

HttpReply post_session(Store& store, std::string_view body) {
  const SubmitResult r = store.submit(body);
  json out{{"status", to_string(r.status)}, {"session_count", r.session_count}};
  if (r.status != SubmitStatus::accepted) {
    out["reason"] = r.reason;
    out["detail"] = r.detail;
  }
  return json_reply(http_status(r.status), out);
}

HttpReply get_progress(const Store& store, std::string_view subject_id) {
  int id = 0;
  const auto [end, ec] = std::from_chars(subject_id.data(), subject_id.data() + subject_id.size(), id);
  if (ec != std::errc{} || end != subject_id.data() + subject_id.size()) {
    return error_reply(400, "invalid_argument", "subject id must be an integer");
  }
  return json_reply(200, {{"subject_id", id},
                          {"known", store.has_subject(id)},
                          {"required", kSessionsPerPhrase},
                          {"turkish", store.progress(id, PhraseId::turkish)},
                          {"password", store.progress(id, PhraseId::password)}});
}

HttpReply get_export(const Store& store, std::string_view phrase, bool deidentify) {
  const auto id = parse_phrase_id(phrase.empty() ? "turkish" : phrase);
  if (!id) return error_reply(400, "invalid_argument", "unknown phrase '" + std::string(phrase) + "'");
  try {
    return {200, "text/csv", store.export_csv(*id, deidentify)};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::empty_store) throw;
    return error_reply(404, to_string(e.code()), e.detail());
  }
}

HttpReply get_phrases() {
  json list = json::array();
  for (auto id : {PhraseId::turkish, PhraseId::password}) {
    const auto& spec = phrase_spec(id);
    list.push_back({{"id", to_string(id)},
                    {"text", spec.text},
                    {"key_tokens", spec.key_tokens},
                    {"sessions", kSessionsPerPhrase}});
  }
  return json_reply(200, list);
}

struct IngestServer::Impl {
  Store& store;
  httplib::Server http;

  explicit Impl(Store& s) : store(s) {}

  static void send(httplib::Response& res, const HttpReply& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  }
};

IngestServer::IngestServer(Store& store, std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(store)) {
  auto& http = impl_->http;
  Impl* self = impl_.get();

  http.Post("/api/session", [self](const httplib::Request& req, httplib::Response& res) {
    Impl::send(res, post_session(self->store, req.body));
  });
  http.Get(R"(/api/subject/([^/]+)/progress)", [self](const httplib::Request& req, httplib::Response& res) {
    Impl::send(res, get_progress(self->store, req.matches[1].str()));
  });
  http.Get("/api/export", [self](const httplib::Request& req, httplib::Response& res) {
    const auto flag = req.get_param_value("deidentify");
    const bool deidentify = flag == "1" || flag == "true";
    Impl::send(res, get_export(self->store, req.get_param_value("phrase"), deidentify));
  });
  http.Get("/api/phrases", [](const httplib::Request&, httplib::Response& res) { Impl::send(res, get_phrases()); });

  // Store failures (disk full, permissions) surface as 500 with the code.
  http.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    HttpReply r = error_reply(500, "internal", "unknown failure");
    try {
      std::rethrow_exception(ep);
    } catch (const Error& e) {
      r = error_reply(500, to_string(e.code()), e.detail());
    } catch (const std::exception& e) {
      r = error_reply(500, "internal", e.what());
    } catch (...) {
    }
    Impl::send(res, r);
  });

  if (static_dir && !http.set_mount_point("/", static_dir->string())) {
    throw Error(ErrorCode::io_error, "static directory " + static_dir->string() + " does not exist");
  }
}

IngestServer::~IngestServer() { stop(); }

int IngestServer::bind(const std::string& host, int port) {
  auto& http = impl_->http;
  if (port == 0) {
    const int bound = http.bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorCode::io_error, "cannot bind " + host);
    return bound;
  }
  if (!http.bind_to_port(host, port)) {
    throw Error(ErrorCode::io_error, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void IngestServer::serve() { impl_->http.listen_after_bind(); }

void IngestServer::stop() {
  if (impl_) impl_->http.stop();
}

bool IngestServer::running() const { return impl_->http.is_running(); }

}  // namespace keydyn::ingest
