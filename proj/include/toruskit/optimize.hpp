#pragma once

#include <functional>

#include "toruskit/linalg.hpp"

namespace toruskit {

struct SimplexResult {
  Vec x;
  double value = 0.0;
  int evaluations = 0;
};

/// Nelder-Mead with dimension-adaptive coefficients. Stops after
/// `max_evals` evaluations or once the best value drops below `target`.
SimplexResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0, double step,
                          int max_evals, double target = 0.0);

}  // namespace toruskit
