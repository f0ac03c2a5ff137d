#include "fpplab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fpplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt_num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void validate(const ModelParams& p) {
  std::visit(Overloaded{
                 [](const Exponential& m) {
                   if (!(m.rate > 0.0) || !std::isfinite(m.rate))
                     throw std::invalid_argument("exponential: rate must be positive");
                 },
                 [](const Uniform& m) {
                   if (!(m.lo >= 0.0) || !(m.hi > m.lo) || !std::isfinite(m.hi))
                     throw std::invalid_argument("uniform: need 0 <= lo < hi");
                 },
                 [](const Dirac& m) {
                   if (!(m.value >= 0.0) || !std::isfinite(m.value))
                     throw std::invalid_argument("dirac: value must be nonnegative");
                 },
                 [](const BernoulliZero& m) {
                   if (!(m.p0 >= 0.0 && m.p0 < 1.0) || !(m.high > 0.0) || !std::isfinite(m.high))
                     throw std::invalid_argument("bernoulli-zero: need p0 in [0,1) and high > 0");
                 },
                 [](const ParetoEdgeTail& m) {
                   if (!(m.beta > 0.0) || !std::isfinite(m.beta))
                     throw std::invalid_argument("pareto: beta must be positive");
                 },
                 [](const TowerTail& m) {
                   if (m.levels < 2)
                     throw std::invalid_argument("tower: levels must be >= 2");
                   if (m.levels > 3)
                     throw std::invalid_argument("tower: levels > 3 exceed the double range (x_4 = inf)");
                   check_dimension(m.dim);
                 },
             },
             p);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double critical_probability(int d) {
  switch (d) {
    case 2: return 0.5;
    case 3: return 0.2488;
    case 4: return 0.1601;
    default: check_dimension(d); return 0.0;
  }
}

TowerLevels tower_levels(int levels) {
  TowerLevels out;
  double x = 3.0;
  double lx = std::log(3.0);
  for (int n = 1; n <= levels; ++n) {
    out.points.push_back(x);
    out.log_points.push_back(lx);
    double next_log = x * lx;
    x = std::exp(next_log);
    lx = next_log;
  }
  return out;
}

double tower_survival(int levels, int d, double t) {
  if (levels < 2) throw std::invalid_argument("tower_survival: levels must be >= 2");
  check_dimension(d);
  TowerLevels tl = tower_levels(levels);
  if (t < tl.points.front()) return 1.0;
  for (int n = 2; n <= levels; ++n)
    if (t < tl.points[static_cast<std::size_t>(n - 1)])
      return std::pow(tl.log_points[static_cast<std::size_t>(n - 1)], -1.0 / (2.0 * d));
  return 0.0;
}

WeightModel::WeightModel(ModelParams params) : params_(params) {
  validate(params_);
  if (auto* t = std::get_if<TowerTail>(&params_)) {
    TowerLevels tl = tower_levels(t->levels);
    tower_points_ = std::move(tl.points);
    tower_log_points_ = std::move(tl.log_points);
  }
}

double WeightModel::survival(double y) const {
  return std::visit(
      Overloaded{
          [&](const Exponential& m) { return y < 0.0 ? 1.0 : std::exp(-m.rate * y); },
          [&](const Uniform& m) {
            if (y < m.lo) return 1.0;
            if (y >= m.hi) return 0.0;
            return (m.hi - y) / (m.hi - m.lo);
          },
          [&](const Dirac& m) { return y < m.value ? 1.0 : 0.0; },
          [&](const BernoulliZero& m) {
            if (y < 0.0) return 1.0;
            return y < m.high ? 1.0 - m.p0 : 0.0;
          },
          [&](const ParetoEdgeTail& m) { return y <= 1.0 ? 1.0 : std::pow(y, -m.beta); },
          [&](const TowerTail& m) {
            if (y < tower_points_.front()) return 1.0;
            for (std::size_t n = 1; n < tower_points_.size(); ++n)
              if (y < tower_points_[n]) return std::pow(tower_log_points_[n], -1.0 / (2.0 * m.dim));
            return 0.0;
          },
      },
      params_);
}

double WeightModel::cdf(double y) const {
  if (const auto* m = std::get_if<Exponential>(&params_))
    return y < 0.0 ? 0.0 : -std::expm1(-m->rate * y);
  return 1.0 - survival(y);
}

double WeightModel::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0))
    throw std::domain_error("quantile: u must lie in (0,1)");
  return std::visit(
      Overloaded{
          [&](const Exponential& m) { return -std::log1p(-u) / m.rate; },
          [&](const Uniform& m) { return m.lo + u * (m.hi - m.lo); },
          [&](const Dirac& m) { return m.value; },
          [&](const BernoulliZero& m) { return u <= m.p0 ? 0.0 : m.high; },
          [&](const ParetoEdgeTail& m) { return std::pow(1.0 - u, -1.0 / m.beta); },
          [&](const TowerTail&) {
            for (double x : tower_points_)
              if (cdf(x) >= u) return x;
            return tower_points_.back();
          },
      },
      params_);
}

double WeightModel::essential_sup() const {
  return std::visit(Overloaded{
                        [](const Exponential&) { return kInf; },
                        [](const Uniform& m) { return m.hi; },
                        [](const Dirac& m) { return m.value; },
                        [](const BernoulliZero& m) { return m.high; },
                        [](const ParetoEdgeTail&) { return kInf; },
                        [&](const TowerTail&) { return tower_points_.back(); },
                    },
                    params_);
}

std::string WeightModel::descriptor() const {
  return std::visit(
      Overloaded{
          [](const Exponential& m) { return "exponential rate=" + fmt_num(m.rate); },
          [](const Uniform& m) { return "uniform lo=" + fmt_num(m.lo) + " hi=" + fmt_num(m.hi); },
          [](const Dirac& m) { return "dirac value=" + fmt_num(m.value); },
          [](const BernoulliZero& m) { return "bernoulli-zero p0=" + fmt_num(m.p0) + " high=" + fmt_num(m.high); },
          [](const ParetoEdgeTail& m) { return "pareto beta=" + fmt_num(m.beta); },
          [](const TowerTail& m) {
            return "tower levels=" + std::to_string(m.levels) + " d=" + std::to_string(m.dim);
          },
      },
      params_);
}

WeightModel WeightModel::parse(const std::string& text) {
  std::istringstream in(text);
  std::string name;
  if (!(in >> name))
    throw std::invalid_argument("model descriptor is empty");
  std::map<std::string, double> kv;
  std::string tok;
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("model descriptor: expected key=value, got '" + tok + "'");
    std::size_t used = 0;
    std::string val = tok.substr(eq + 1);
    double x = std::stod(val, &used);
    if (used != val.size())
      throw std::invalid_argument("model descriptor: bad number '" + val + "'");
    kv[tok.substr(0, eq)] = x;
  }
  auto take = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end())
      throw std::invalid_argument(std::string("model descriptor: missing '") + key + "' for " + name);
    double v = it->second;
    kv.erase(it);
    return v;
  };
  auto done = [&](WeightModel m) {
    if (!kv.empty())
      throw std::invalid_argument("model descriptor: unknown key '" + kv.begin()->first + "' for " + name);
    return m;
  };
  if (name == "exponential") return done(exponential(take("rate")));
  if (name == "uniform") {
    double lo = take("lo");
    return done(uniform(lo, take("hi")));
  }
  if (name == "dirac") return done(dirac(take("value")));
  if (name == "bernoulli-zero") {
    double p0 = take("p0");
    return done(bernoulli_zero(p0, take("high")));
  }
  if (name == "pareto") return done(pareto(take("beta")));
  if (name == "tower") {
    int levels = static_cast<int>(take("levels"));
    return done(tower(levels, static_cast<int>(take("d"))));
  }
  throw std::invalid_argument("unknown weight model '" + name + "'");
}

std::uint64_t WeightModel::hash() const {
  // FNV-1a over the descriptor
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : descriptor()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double EdgeWeightField::uniform(const Edge& e) const {
  std::uint64_t h = splitmix64(seed_ ^ 0x5851f42d4c957f2dULL);
  for (int i = 0; i < e.base.dim; ++i)
    h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.base[i])));
  h = splitmix64(h ^ (static_cast<std::uint64_t>(e.axis) << 8 | static_cast<std::uint64_t>(e.base.dim)));
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

YStatistic::YStatistic(WeightModel model, int d) : model_(std::move(model)), dim_(d) { check_dimension(d); }

double YStatistic::tail(double y) const {
  if (const auto* m = std::get_if<Exponential>(&model_.params()))
    return y < 0.0 ? 1.0 : std::exp(-2.0 * dim_ * m->rate * y);
  return std::pow(model_.survival(y), 2 * dim_);
}

double YStatistic::expected_truncated(double t) const {
  if (t < 0.0) throw std::domain_error("expected_truncated: t must be nonnegative");
  const double k = 2.0 * dim_;
  return std::visit(
      Overloaded{
          [&](const Exponential& m) {
            double lambda = k * m.rate;
            return std::isinf(t) ? 1.0 / lambda : -std::expm1(-lambda * t) / lambda;
          },
          [&](const Uniform& m) {
            if (t <= m.lo) return t;
            double w = m.hi - m.lo;
            double rest = std::max(0.0, (m.hi - std::min(t, m.hi)) / w);
            return m.lo + w / (k + 1.0) * (1.0 - std::pow(rest, k + 1.0));
          },
          [&](const Dirac& m) { return std::min(t, m.value); },
          [&](const BernoulliZero& m) { return std::pow(1.0 - m.p0, k) * std::min(t, m.high); },
          [&](const ParetoEdgeTail& m) {
            if (t <= 1.0) return t;
            double g = k * m.beta;
            if (std::isinf(t)) return g > 1.0 ? 1.0 + 1.0 / (g - 1.0) : kInf;
            if (std::abs(g - 1.0) < 1e-12) return 1.0 + std::log(t);
            return 1.0 + (std::pow(t, 1.0 - g) - 1.0) / (1.0 - g);
          },
          [&](const TowerTail& m) {
            TowerLevels tl = tower_levels(m.levels);
            double acc = std::min(t, tl.points.front());
            for (std::size_t n = 1; n < tl.points.size(); ++n) {
              double lo = tl.points[n - 1];
              if (t <= lo) break;
              double hi = std::min(t, tl.points[n]);
              double s = std::pow(tl.log_points[n], -1.0 / (2.0 * m.dim));
              acc += (hi - lo) * std::pow(s, k);
            }
            return acc;
          },
      },
      model_.params());
}

BoundRatio bound_ratio(const YStatistic& ys, double t) {
  if (!(t > 0.0)) throw std::domain_error("bound_ratio: t must be positive");
  BoundRatio r;
  r.lower = std::max(t * ys.tail(t), 1.0);
  r.upper = ys.expected_truncated(t);
  r.ratio = r.upper / r.lower;
  return r;
}

}  // namespace fpplab
