#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace poincare {

/// Number of worker threads used by parallel loops. Results never depend on it:
/// loops write into per-index slots and every reduction runs in index order.
void set_worker_count(int jobs);
int worker_count();

/// Runs body(i) for i in [0, n). Indices are split into contiguous blocks.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Neumaier-compensated sum in index order.
double ordered_sum(std::span<const double> values);

/// log(sum(exp(v))) in index order; returns -inf for an empty span.
double ordered_log_sum_exp(std::span<const double> log_values);

}  // namespace poincare
