#include <atomic>
#include <map>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "see/errors.hpp"
#include "see/oracle.hpp"

namespace see {

using nlohmann::json;

struct DefenderService::Impl {
  Impl(std::shared_ptr<const Model> m, ServiceOptions o)
      : model(std::move(m)), options(std::move(o)) {}

  void install_routes() {
    const int threads = std::max(1, options.worker_threads);
    server.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };

    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"status":"ok"})", "application/json");
    });

    server.Post("/predict", [this](const httplib::Request& req, httplib::Response& res) {
      handle_predict(req, res);
    });
  }

  void handle_predict(const httplib::Request& req, httplib::Response& res) {
    auto reply = [&res](int status, const json& body) {
      res.status = status;
      res.set_content(body.dump(), "application/json");
    };

    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("features") ||
        !body["features"].is_array()) {
      return reply(400, {{"error", "malformed request"}});
    }
    std::vector<double> x;
    for (const auto& v : body["features"]) {
      if (!v.is_number()) return reply(400, {{"error", "malformed request"}});
      x.push_back(v.get<double>());
    }
    if (x.size() != model->dim()) {
      return reply(422, {{"error", "dimension mismatch"}, {"expected", model->dim()}});
    }

    if (options.budget_per_key) {
      const std::string key = req.get_header_value("X-Api-Key");
      std::lock_guard lock(budget_mutex);
      std::size_t& used = used_by_key[key];
      if (used >= *options.budget_per_key) {
        return reply(429, {{"error", "budget exhausted"}});
      }
      ++used;
    }

    ClassLabel label = model->predict(x);
    ++served;
    reply(200, {{"label", to_int(label)}});
  }

  void bind() {
    install_routes();
    server.set_tcp_nodelay(true);
    if (options.port == 0) {
      bound_port = server.bind_to_any_port(options.host);
    } else {
      bound_port = server.bind_to_port(options.host, options.port) ? options.port : -1;
    }
    if (bound_port <= 0) {
      throw Error("cannot bind defender service to " + options.host + ":" +
                  std::to_string(options.port));
    }
  }

  std::shared_ptr<const Model> model;
  ServiceOptions options;
  httplib::Server server;
  std::thread thread;
  int bound_port = -1;
  std::atomic<std::size_t> served{0};
  std::mutex budget_mutex;
  std::map<std::string, std::size_t> used_by_key;
};

DefenderService::DefenderService(std::shared_ptr<const Model> model,
                                 ServiceOptions options)
    : impl_(std::make_unique<Impl>(std::move(model), std::move(options))) {
  if (!impl_->model) throw Error("DefenderService needs a model");
}

DefenderService::~DefenderService() { stop(); }

void DefenderService::start() {
  impl_->bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void DefenderService::run() {
  impl_->bind();
  impl_->server.listen_after_bind();
}

void DefenderService::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int DefenderService::port() const noexcept { return impl_->bound_port; }

std::string DefenderService::endpoint() const {
  return "http://" + impl_->options.host + ":" + std::to_string(impl_->bound_port);
}

std::size_t DefenderService::requests_served() const noexcept {
  return impl_->served.load();
}

}  // namespace see
