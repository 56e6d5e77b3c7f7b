#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "see/errors.hpp"
#include "see/oracle.hpp"

namespace see {
namespace {

ClassLabel parse_label_body(const std::string& body) {
  auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("label") ||
      !j["label"].is_number_integer()) {
    throw TransportError("malformed /predict response: " + body);
  }
  int v = j["label"].get<int>();
  if (v != 0 && v != 1) throw TransportError("label out of range in response: " + body);
  return v == 1 ? ClassLabel::Malicious : ClassLabel::Legitimate;
}

std::size_t expected_dim(const std::string& body, std::size_t fallback) {
  auto j = nlohmann::json::parse(body, nullptr, false);
  if (!j.is_discarded() && j.is_object() && j.contains("expected") &&
      j["expected"].is_number_unsigned()) {
    return j["expected"].get<std::size_t>();
  }
  return fallback;
}

}  // namespace

struct RemoteSource::Impl {
  Impl(const std::string& endpoint, RemoteOptions opts)
      : client(endpoint), options(std::move(opts)) {
    client.set_keep_alive(true);
    client.set_tcp_nodelay(true);
    client.set_connection_timeout(options.timeout);
    client.set_read_timeout(options.timeout);
    client.set_write_timeout(options.timeout);
  }

  ClassLabel predict(std::span<const double> x) {
    nlohmann::json req = {{"features", std::vector<double>(x.begin(), x.end())}};
    const std::string body = req.dump();
    httplib::Headers headers;
    if (!options.api_key.empty()) headers.emplace("X-Api-Key", options.api_key);

    auto delay = options.backoff;
    std::string last_error;
    for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(delay);
        delay *= 2;
      }
      auto res = client.Post("/predict", headers, body, "application/json");
      if (!res) {
        last_error = httplib::to_string(res.error());
        continue;
      }
      if (res->status == 200) return parse_label_body(res->body);
      if (res->status == 429) throw BudgetExhausted("remote budget exhausted");
      if (res->status == 422) {
        throw DimensionMismatch(expected_dim(res->body, x.size()), x.size());
      }
      last_error = "HTTP " + std::to_string(res->status);
      if (res->status < 500) break;
    }
    throw TransportError("remote predict failed: " + last_error);
  }

  httplib::Client client;
  RemoteOptions options;
};

RemoteSource::RemoteSource(std::string endpoint, std::size_t dim,
                           RemoteOptions options)
    : impl_(std::make_unique<Impl>(endpoint, std::move(options))), dim_(dim) {}

RemoteSource::~RemoteSource() = default;

ClassLabel RemoteSource::label(std::span<const double> x) {
  return impl_->predict(x);
}

ClassLabel remote_predict(const std::string& endpoint, std::span<const double> x,
                          const RemoteOptions& options) {
  RemoteSource source(endpoint, x.size(), options);
  return source.label(x);
}

}  // namespace see
