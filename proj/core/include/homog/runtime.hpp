#pragma once

#include <functional>
#include <span>

namespace homog {

/// Runs body(i) for i in [0, count). With workers > 1 the tasks are
/// distributed over a static stride partition; each task must write only
/// to its own output slot so results do not depend on the worker count.
void parallel_for(int count, int workers, const std::function<void(int)>& body);

/// Pairwise (tree) summation with a fixed reduction order.
double pairwise_sum(std::span<const double> xs);

}  // namespace homog
