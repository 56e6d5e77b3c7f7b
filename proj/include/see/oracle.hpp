#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "see/models.hpp"
#include "see/types.hpp"

namespace see {

enum class ProbePhase { Seed, Explore };

/// Whatever answers a probe: an in-process model or a remote service.
class LabelSource {
 public:
  virtual ~LabelSource() = default;
  virtual std::size_t dim() const = 0;
  /// May throw TransportError; the caller does not count failed probes.
  virtual ClassLabel label(std::span<const double> x) = 0;
};

class LocalSource final : public LabelSource {
 public:
  explicit LocalSource(std::shared_ptr<const Model> model);
  std::size_t dim() const override { return model_->dim(); }
  ClassLabel label(std::span<const double> x) override { return model_->predict(x); }

 private:
  std::shared_ptr<const Model> model_;
};

struct PhaseCount {
  std::size_t probes = 0;
  std::optional<std::chrono::system_clock::time_point> first;
  std::optional<std::chrono::system_clock::time_point> last;
};

struct ProbeLedger {
  PhaseCount seed;
  PhaseCount explore;

  std::size_t total() const noexcept { return seed.probes + explore.probes; }
};

/// The adversary's only view of the defender: labels in, labels out, with a
/// hard cap on explore-phase probes. Seed probes are tallied separately and
/// do not draw down the explore budget.
class ProbeOracle {
 public:
  ProbeOracle(std::unique_ptr<LabelSource> source,
              std::optional<std::size_t> budget = std::nullopt);

  static ProbeOracle local(std::shared_ptr<const Model> model,
                           std::optional<std::size_t> budget = std::nullopt);

  ClassLabel predict(std::span<const double> x, ProbePhase phase);

  std::size_t dim() const { return source_->dim(); }
  std::optional<std::size_t> budget() const noexcept { return budget_; }
  std::size_t probes_used() const noexcept { return ledger_.explore.probes; }
  std::size_t seed_probes_used() const noexcept { return ledger_.seed.probes; }
  std::optional<std::size_t> remaining() const noexcept;
  const ProbeLedger& ledger() const noexcept { return ledger_; }

 private:
  std::unique_ptr<LabelSource> source_;
  std::optional<std::size_t> budget_;
  ProbeLedger ledger_;
};

struct RemoteOptions {
  std::string api_key;
  int max_retries = 3;
  std::chrono::milliseconds backoff{50};
  std::chrono::seconds timeout{10};
};

/// Speaks the /predict wire protocol. Connection failures and 5xx answers
/// are retried with doubling backoff, then surface as TransportError. A 429
/// becomes BudgetExhausted and a 422 becomes DimensionMismatch.
class RemoteSource final : public LabelSource {
 public:
  RemoteSource(std::string endpoint, std::size_t dim, RemoteOptions options = {});
  ~RemoteSource() override;
  RemoteSource(const RemoteSource&) = delete;
  RemoteSource& operator=(const RemoteSource&) = delete;

  std::size_t dim() const override { return dim_; }
  ClassLabel label(std::span<const double> x) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::size_t dim_;
};

/// One-shot POST /predict against `endpoint` (e.g. "http://127.0.0.1:8080").
ClassLabel remote_predict(const std::string& endpoint, std::span<const double> x,
                          const RemoteOptions& options = {});

struct ServiceOptions {
  std::string host = "127.0.0.1";
  /// 0 picks a free port.
  int port = 0;
  /// Per api-key cap on /predict calls; requests without a key share the
  /// empty key.
  std::optional<std::size_t> budget_per_key;
  int worker_threads = 4;
};

/// Reference defender behind the wire protocol. Answers only labels; the
/// model kind never appears in any response.
class DefenderService {
 public:
  DefenderService(std::shared_ptr<const Model> model, ServiceOptions options);
  ~DefenderService();
  DefenderService(const DefenderService&) = delete;
  DefenderService& operator=(const DefenderService&) = delete;

  /// Binds and starts serving on a background thread. Throws Error on bind
  /// failure.
  void start();
  /// Binds and serves on the calling thread until stop().
  void run();
  void stop();

  int port() const noexcept;
  std::string endpoint() const;
  std::size_t requests_served() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace see
