#include "fpplab/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fpplab {

double StepFunction::at(double s) const {
  if (breaks.empty() || s < breaks.front()) return 0.0;
  auto it = std::upper_bound(breaks.begin(), breaks.end(), s);
  return values[static_cast<std::size_t>(it - breaks.begin()) - 1];
}

double StepFunction::integral(double upto) const {
  upto = std::min(upto, end);
  double acc = 0.0;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    double lo = breaks[i];
    if (lo >= upto) break;
    double hi = i + 1 < breaks.size() ? std::min(breaks[i + 1], upto) : upto;
    acc += values[i] * (hi - lo);
  }
  return acc;
}

StepFunction StepFunction::sample(const std::function<double(double)>& f, double end, int n) {
  if (n < 1 || !(end > 0.0)) throw std::invalid_argument("StepFunction::sample: need n >= 1 and end > 0");
  StepFunction out;
  out.end = end;
  out.breaks.reserve(static_cast<std::size_t>(n));
  out.values.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double s = end * i / n;
    out.breaks.push_back(s);
    out.values.push_back(f(s));
  }
  return out;
}

double threshold_measure(const StepFunction& f, double a, const std::function<double(double)>& psi, int d) {
  if (!(a > 0.0)) throw std::invalid_argument("threshold_measure: a must be positive");
  auto threshold = [&](double s) { return a * std::pow(s, d - 1) * psi(s); };
  double total = 0.0;
  for (std::size_t i = 0; i < f.breaks.size(); ++i) {
    double lo = f.breaks[i];
    if (lo >= f.end) break;
    double hi = i + 1 < f.breaks.size() ? std::min(f.breaks[i + 1], f.end) : f.end;
    double c = f.values[i];
    if (hi <= lo) continue;
    if (threshold(lo) > c) continue;
    if (threshold(hi) <= c) {
      total += hi - lo;
      continue;
    }
    // threshold(left) <= c < threshold(right)
    double left = lo, right = hi;
    for (int it = 0; it < 200 && right - left > 1e-14 * std::max(1.0, right); ++it) {
      double mid = 0.5 * (left + right);
      (threshold(mid) <= c ? left : right) = mid;
    }
    total += left - lo;
  }
  return total;
}

}  // namespace fpplab
