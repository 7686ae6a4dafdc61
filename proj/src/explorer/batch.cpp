#include <exception>

#include "chipcost/explorer.hpp"

namespace chipcost {

namespace {

BatchResult evaluate_one(const SystemSpec& sys, const Evaluator& evaluator) {
  BatchResult out;
  try {
    out.report = evaluator.evaluate(sys);
  } catch (const Error& e) {
    out.error = e.what();
    out.error_kind = e.kind();
  } catch (const std::exception& e) {
    out.error = e.what();
    out.error_kind = ErrorKind::model;
  }
  return out;
}

}  // namespace

std::vector<BatchResult> evaluate_batch_serial(std::span<const SystemSpec> systems,
                                               const Evaluator& evaluator) {
  std::vector<BatchResult> out;
  out.reserve(systems.size());
  for (const auto& sys : systems) out.push_back(evaluate_one(sys, evaluator));
  return out;
}

std::vector<BatchResult> evaluate_batch_parallel(std::span<const SystemSpec> systems,
                                                 const Evaluator& evaluator) {
  std::vector<BatchResult> out(systems.size());
  const auto n = static_cast<long>(systems.size());
  // Each slot is written by exactly one iteration; output order is input order.
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < n; ++i) out[i] = evaluate_one(systems[i], evaluator);
  return out;
}

std::vector<BatchResult> evaluate_batch(std::span<const SystemSpec> systems,
                                        const Evaluator& evaluator, Execution execution) {
  return execution == Execution::parallel ? evaluate_batch_parallel(systems, evaluator)
                                          : evaluate_batch_serial(systems, evaluator);
}

}  // namespace chipcost
