#pragma once

// Deterministic scalar maximization: golden-section search plus a grid-seeded
// variant that is robust to mild multi-modality. No randomness anywhere.

#include <functional>

namespace cbs {

struct OptimizeResult {
  double arg = 0.0;
  double value = 0.0;
  bool boundary = false;  // argmax pinned at (or within tolerance of) a bracket edge
  int evaluations = 0;
};

// Golden-section search for a maximum of f on [lo, hi] to the given bracket
// tolerance in the argument. Throws NumericalError on a non-finite objective
// value. Assumes f is unimodal on the bracket; for a monotone f the result is
// the better edge with `boundary` set.
OptimizeResult maximize_scalar(const std::function<double(double)>& f, double lo,
                               double hi, double tol);

// Evaluate f on a uniform grid of `presample` points (endpoints included),
// then golden-section within the neighborhood of the best grid point. Returns
// the better of the two candidates. Deterministic for fixed inputs.
OptimizeResult grid_refined_maximum(const std::function<double(double)>& f, double lo,
                                    double hi, int presample, double tol);

}  // namespace cbs
