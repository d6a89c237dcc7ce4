#include "koslinker/service.hpp"

#include <charconv>

#include "httplib.h"
#include "json.hpp"
#include "koslinker/error.hpp"

namespace koslinker {
namespace {

HttpResponse error_response(int status, const std::string& message) {
  return {status, "application/json", nlohmann::json{{"error", message}}.dump()};
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

constexpr const char* kIndexPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>koslinker</title></head>
<body>
<h1>koslinker link service</h1>
<ul>
<li><a href="/api/tree">GET /api/tree</a> &mdash; link tree document</li>
<li>GET /api/suggest?classes=CODE[,CODE...]&amp;k=N &mdash; descriptor suggestions</li>
</ul>
</body></html>
)";

}  // namespace

LinkService::LinkService(Data data) : data_(std::move(data)) {
  if (data_.model) {
    if (!data_.classification || !data_.thesaurus)
      throw ValidationError("suggestions need the classification and thesaurus alongside the model");
    check_compatible(*data_.model, *data_.classification);
  }
}

HttpResponse LinkService::tree() const { return {200, "application/json", data_.tree_document}; }

HttpResponse LinkService::suggest(std::optional<std::string_view> classes, std::optional<std::string_view> k) const {
  if (!data_.model) return error_response(503, "suggestions unavailable: no model loaded");

  std::size_t top_k = 5;
  if (k) {
    const auto text = trim(*k);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), top_k);
    if (ec != std::errc{} || ptr != text.data() + text.size() || top_k == 0)
      return error_response(400, "k must be a positive integer");
  }

  std::vector<TopicId> topics;
  std::string_view rest = classes.value_or("");
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto code = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (code.empty()) continue;
    const auto topic = data_.classification->topic_of(code);
    if (!topic) return error_response(400, "unknown class code '" + std::string(code) + "'");
    topics.push_back(*topic);
  }
  if (topics.empty()) return error_response(400, "parameter 'classes' must name at least one class code");

  const auto ranked = suggest_descriptors(*data_.model, *data_.thesaurus, topics, top_k);
  return {200, "application/json", descriptors_json(ranked)};
}

struct HttpServer::Impl {
  std::shared_ptr<const LinkService> service;
  ServeOptions options;
  httplib::Server server;
};

namespace {

void send(httplib::Response& res, const HttpResponse& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

std::optional<std::string_view> param(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  const auto it = req.params.find(key);
  return std::string_view(it->second);
}

}  // namespace

HttpServer::HttpServer(std::shared_ptr<const LinkService> service, ServeOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  impl_->options = std::move(options);
  auto& svr = impl_->server;
  const auto* svc = impl_->service.get();

  svr.Get("/api/tree", [svc](const httplib::Request&, httplib::Response& res) { send(res, svc->tree()); });
  svr.Get("/api/suggest", [svc](const httplib::Request& req, httplib::Response& res) {
    send(res, svc->suggest(param(req, "classes"), param(req, "k")));
  });

  if (!impl_->options.assets.empty()) {
    if (!svr.set_mount_point("/", impl_->options.assets.string()))
      throw Error("asset directory not found: " + impl_->options.assets.string());
  } else {
    svr.Get("/", [](const httplib::Request&, httplib::Response& res) { res.set_content(kIndexPage, "text/html"); });
  }
}

HttpServer::~HttpServer() = default;

int HttpServer::bind() {
  auto& o = impl_->options;
  auto& svr = impl_->server;
  if (o.port == 0) {
    const int port = svr.bind_to_any_port(o.host);
    if (port < 0) throw Error("cannot bind " + o.host + " to an ephemeral port");
    o.port = port;
    return port;
  }
  if (o.port < 1 || o.port > 65535) throw ValidationError("port must lie in [1, 65535]");
  if (!svr.bind_to_port(o.host, o.port))
    throw Error("cannot bind " + o.host + ":" + std::to_string(o.port) + " (port in use?)");
  return o.port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace koslinker
