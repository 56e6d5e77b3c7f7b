#include "see/errors.hpp"
#include "see/oracle.hpp"

namespace see {

LocalSource::LocalSource(std::shared_ptr<const Model> model)
    : model_(std::move(model)) {
  if (!model_) throw Error("LocalSource needs a model");
}

ProbeOracle::ProbeOracle(std::unique_ptr<LabelSource> source,
                         std::optional<std::size_t> budget)
    : source_(std::move(source)), budget_(budget) {
  if (!source_) throw Error("ProbeOracle needs a label source");
}

ProbeOracle ProbeOracle::local(std::shared_ptr<const Model> model,
                               std::optional<std::size_t> budget) {
  return ProbeOracle(std::make_unique<LocalSource>(std::move(model)), budget);
}

std::optional<std::size_t> ProbeOracle::remaining() const noexcept {
  if (!budget_) return std::nullopt;
  return *budget_ - ledger_.explore.probes;
}

ClassLabel ProbeOracle::predict(std::span<const double> x, ProbePhase phase) {
  require_dim(source_->dim(), x.size());
  PhaseCount& count = phase == ProbePhase::Seed ? ledger_.seed : ledger_.explore;
  if (phase == ProbePhase::Explore && budget_ && ledger_.explore.probes >= *budget_) {
    throw BudgetExhausted("explore budget of " + std::to_string(*budget_) +
                          " probes exhausted");
  }
  ClassLabel answer = source_->label(x);
  auto now = std::chrono::system_clock::now();
  ++count.probes;
  if (!count.first) count.first = now;
  count.last = now;
  return answer;
}

}  // namespace see
