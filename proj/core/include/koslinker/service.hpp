#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "koslinker/kos.hpp"
#include "koslinker/links.hpp"
#include "koslinker/plltm.hpp"

namespace koslinker {

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Read-only request handling over immutable loaded data. Thread-safe.
class LinkService {
 public:
  struct Data {
    std::string tree_document;  // served byte-for-byte
    std::shared_ptr<const TrainedModel> model;  // null disables suggestions
    std::shared_ptr<const ClassificationSystem> classification;
    std::shared_ptr<const Thesaurus> thesaurus;
  };

  explicit LinkService(Data data);

  /// GET /api/tree
  HttpResponse tree() const;
  /// GET /api/suggest?classes=code1,code2&k=N
  HttpResponse suggest(std::optional<std::string_view> classes, std::optional<std::string_view> k) const;

 private:
  Data data_;
};

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  /// Static UI assets mounted at "/"; a built-in index page is served when empty.
  std::filesystem::path assets;
};

/// Runs an HTTP server over a LinkService until stop() is called.
class HttpServer {
 public:
  HttpServer(std::shared_ptr<const LinkService> service, ServeOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the socket; throws Error if the address is unavailable. With
  /// port 0 an ephemeral port is chosen. Returns the bound port.
  int bind();
  /// Blocks serving requests until stop().
  void listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace koslinker
