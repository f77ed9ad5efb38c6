#include "optimize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "errors.hpp"

namespace cbs {

namespace {

double checked_eval(const std::function<double(double)>& f, double x, int& count) {
  const double v = f(x);
  ++count;
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "objective returned a non-finite value at x = " << x;
    throw NumericalError(os.str());
  }
  return v;
}

}  // namespace

OptimizeResult maximize_scalar(const std::function<double(double)>& f, double lo,
                               double hi, double tol) {
  if (!(lo < hi)) throw std::invalid_argument("maximize_scalar needs lo < hi");
  if (!(tol > 0.0)) throw std::invalid_argument("bracket tolerance must be positive");

  static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  static const double invphi2 = (3.0 - std::sqrt(5.0)) / 2.0;

  OptimizeResult out;
  double a = lo, b = hi;
  double h = b - a;
  if (h <= tol) {
    out.arg = 0.5 * (a + b);
    out.value = checked_eval(f, out.arg, out.evaluations);
    out.boundary = true;
    return out;
  }
  double c = a + invphi2 * h;
  double d = a + invphi * h;
  double fc = checked_eval(f, c, out.evaluations);
  double fd = checked_eval(f, d, out.evaluations);
  while (h > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      h = b - a;
      c = a + invphi2 * h;
      fc = checked_eval(f, c, out.evaluations);
    } else {
      a = c;
      c = d;
      fc = fd;
      h = b - a;
      d = a + invphi * h;
      fd = checked_eval(f, d, out.evaluations);
    }
  }
  if (fc > fd) {
    out.arg = c;
    out.value = fc;
  } else {
    out.arg = d;
    out.value = fd;
  }
  const double edge = 2.0 * tol + 1e-15 * (hi - lo);
  out.boundary = (out.arg - lo <= edge) || (hi - out.arg <= edge);
  return out;
}

OptimizeResult grid_refined_maximum(const std::function<double(double)>& f, double lo,
                                    double hi, int presample, double tol) {
  if (presample < 3) throw std::invalid_argument("presample needs at least 3 points");
  if (!(lo < hi)) throw std::invalid_argument("grid_refined_maximum needs lo < hi");

  OptimizeResult out;
  std::vector<double> xs(static_cast<size_t>(presample));
  const double step = (hi - lo) / static_cast<double>(presample - 1);
  int best = 0;
  double best_val = -HUGE_VAL;
  for (int i = 0; i < presample; ++i) {
    const double x = (i == presample - 1) ? hi : lo + step * static_cast<double>(i);
    xs[static_cast<size_t>(i)] = x;
    const double v = checked_eval(f, x, out.evaluations);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double sub_lo = xs[static_cast<size_t>(std::max(0, best - 1))];
  const double sub_hi = xs[static_cast<size_t>(std::min(presample - 1, best + 1))];
  OptimizeResult refined = maximize_scalar(f, sub_lo, sub_hi, tol);
  out.evaluations += refined.evaluations;
  if (refined.value > best_val) {
    out.arg = refined.arg;
    out.value = refined.value;
  } else {
    out.arg = xs[static_cast<size_t>(best)];
    out.value = best_val;
  }
  const double edge = 2.0 * tol + 1e-15 * (hi - lo);
  out.boundary = (out.arg - lo <= edge) || (hi - out.arg <= edge);
  return out;
}

}  // namespace cbs
