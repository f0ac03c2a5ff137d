#pragma once

#include <functional>
#include <vector>

namespace fpplab {

// Right-continuous piecewise-constant function on [0, end]: value[i] on
// [breaks[i], breaks[i+1]), the last piece extending to end (inclusive).
// Zero for s < breaks[0].
struct StepFunction {
  std::vector<double> breaks;
  std::vector<double> values;
  double end = 0.0;

  double at(double s) const;
  // int_0^upto f(s) ds, upto clipped to end
  double integral(double upto) const;
  double integral() const { return integral(end); }

  // Left-endpoint samples of f on a uniform grid of n cells over [0, end].
  static StepFunction sample(const std::function<double(double)>& f, double end, int n);
};

// Leb{s in [0, end] : f(s) >= a s^{d-1} psi(s)} for nondecreasing psi >= 0.
// Within each constant piece the threshold a s^{d-1} psi(s) is nondecreasing,
// so the set is an initial segment of the piece; its end is found by bisection.
double threshold_measure(const StepFunction& f, double a, const std::function<double(double)>& psi, int d);

}  // namespace fpplab
