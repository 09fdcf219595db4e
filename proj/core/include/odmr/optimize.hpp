#pragma once

#include <functional>
#include <span>
#include <vector>

namespace odmr {

struct SimplexOptions {
  int max_iterations = 500;
  // Converged when every vertex lies within this (max-norm) distance of the best.
  double tolerance = 1e-3;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

// Nelder-Mead downhill simplex with the standard coefficients (reflection 1,
// expansion 2, contraction 1/2, shrink 1/2). The initial simplex offsets x0
// by steps[i] along each axis. Returns the best vertex seen even when the
// iteration budget runs out. Zero dimensions evaluate x0 once.
SimplexResult nelder_mead(const Objective& f, std::vector<double> x0,
                          std::span<const double> steps, const SimplexOptions& options = {});

}  // namespace odmr
