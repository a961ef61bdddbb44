#include "semicov/circle_map.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iterator>
#include <numbers>

#include "semicov/error.hpp"

namespace semicov {

double wrap01(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

double circle_distance(double a, double b) {
  double r = wrap01(a - b);
  return std::min(r, 1.0 - r);
}

LiftedCircleMap::LiftedCircleMap(std::vector<double> samples, FamilyTag tag)
    : samples_(std::move(samples)), tag_(std::move(tag)) {
  if (samples_.size() < kMinSamples + 1) {
    throw Error(ErrorKind::ValidationError, "a lift needs at least " + std::to_string(kMinSamples) + " grid cells");
  }
  for (double v : samples_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::ValidationError, "non-finite lift sample");
  }
  const double span = samples_.back() - samples_.front();
  const double rounded = std::round(span);
  if (std::abs(span - rounded) > kDegreeTol) {
    throw Error(ErrorKind::NonIntegerDegree, "F(1) - F(0) = " + std::to_string(span));
  }
  degree_ = static_cast<int>(rounded);
  if (std::abs(degree_) <= 1) {
    throw Error(ErrorKind::DegreeTooSmall, "degree " + std::to_string(degree_));
  }
  samples_.back() = samples_.front() + degree_;

  covering_ = true;
  for (std::size_t i = 0; i + 1 < samples_.size(); ++i) {
    const double step = samples_[i + 1] - samples_[i];
    if (degree_ > 0 ? !(step > 0.0) : !(step < 0.0)) {
      covering_ = false;
      break;
    }
  }
}

double LiftedCircleMap::operator()(double x) const {
  const double k = std::floor(x);
  const double n = static_cast<double>(grid_size());
  const double pos = (x - k) * n;
  auto i = static_cast<std::size_t>(pos);
  if (i >= grid_size()) i = grid_size() - 1;
  const double w = pos - static_cast<double>(i);
  const double base = w == 0.0 ? samples_[i] : samples_[i] + w * (samples_[i + 1] - samples_[i]);
  return base + k * degree_;
}

double LiftedCircleMap::iterate(double x, int n) const {
  for (int k = 0; k < n; ++k) x = (*this)(x);
  return x;
}

double LiftedCircleMap::inverse(double y) const {
  if (!covering_) throw Error(ErrorKind::NotACovering, "inverse of a non-monotone lift");
  const double d = degree_;
  const double k = std::floor((y - samples_.front()) / d);
  double r = y - k * d;
  std::size_t i = 0;
  if (degree_ > 0) {
    r = std::clamp(r, samples_.front(), samples_.back());
    auto it = std::upper_bound(samples_.begin(), samples_.end(), r);
    i = static_cast<std::size_t>(std::distance(samples_.begin(), it));
  } else {
    r = std::clamp(r, samples_.back(), samples_.front());
    auto it = std::upper_bound(samples_.begin(), samples_.end(), r, std::greater<>());
    i = static_cast<std::size_t>(std::distance(samples_.begin(), it));
  }
  i = std::clamp<std::size_t>(i, 1, grid_size()) - 1;
  const double w = (r - samples_[i]) / (samples_[i + 1] - samples_[i]);
  return (static_cast<double>(i) + w) / static_cast<double>(grid_size()) + k;
}

LiftedCircleMap LiftedCircleMap::shifted(double c) const {
  std::vector<double> s(samples_);
  for (double& v : s) v += c;
  return LiftedCircleMap(std::move(s), tag_);
}

LiftedCircleMap make_lift(std::span<const double> samples) {
  return LiftedCircleMap(std::vector<double>(samples.begin(), samples.end()));
}

LiftedCircleMap make_lift(const std::function<double(double)>& lift, std::size_t n, FamilyTag tag) {
  if (n < kMinSamples) throw Error(ErrorKind::ValidationError, "grid too coarse");
  std::vector<double> s(n + 1);
  for (std::size_t i = 0; i <= n; ++i) s[i] = lift(static_cast<double>(i) / static_cast<double>(n));
  return LiftedCircleMap(std::move(s), std::move(tag));
}

LiftedCircleMap make_linear(int d, double c, std::size_t n) {
  return make_lift([=](double x) { return d * x + c; }, n, {"linear", {{"degree", d}, {"shift", c}}});
}

LiftedCircleMap make_sine(int d, double amplitude, std::size_t n) {
  return make_lift([=](double x) { return d * x + amplitude * std::sin(2.0 * std::numbers::pi * x); }, n,
                   {"sine", {{"degree", d}, {"amplitude", amplitude}}});
}

double evaluate_lift(const LiftedCircleMap& map, double x) { return map(x); }

namespace {

int minimal_period(const LiftedCircleMap& map, double x, int n) {
  for (int m = 1; m < n; ++m) {
    if (n % m != 0) continue;
    if (circle_distance(map.iterate(x, m), x) <= 1e-7) return m;
  }
  return n;
}

}  // namespace

std::vector<PeriodicPoint> find_periodic_points(const LiftedCircleMap& map, int n, double tol) {
  if (!map.is_covering()) throw Error(ErrorKind::NotACovering, "periodic point search needs a covering");
  if (n < 1) throw Error(ErrorKind::BadParams, "period must be >= 1");

  const double expansion = std::pow(std::abs(static_cast<double>(map.degree())), n);
  const std::size_t cells = std::min<std::size_t>(
      std::size_t{1} << 22, std::max<std::size_t>(4 * map.grid_size(), static_cast<std::size_t>(16 * expansion)));
  auto g = [&](double x) { return map.iterate(x, n) - x; };

  std::vector<double> roots;
  double x0 = 0.0;
  double g0 = g(x0);
  for (std::size_t i = 1; i <= cells; ++i) {
    const double x1 = static_cast<double>(i) / static_cast<double>(cells);
    const double g1 = g(x1);
    const double lo = std::min(g0, g1);
    const double hi = std::max(g0, g1);
    for (double k = std::ceil(lo); k <= hi; k += 1.0) {
      if (g0 == k) {
        roots.push_back(x0);
        continue;
      }
      if (g1 == k) continue;  // picked up by the next cell (or x = 1 == x = 0)
      double a = x0;
      double b = x1;
      const bool rising = g0 < k;
      while (b - a > tol) {
        const double m = 0.5 * (a + b);
        if ((g(m) < k) == rising) a = m; else b = m;
      }
      roots.push_back(0.5 * (a + b));
    }
    x0 = x1;
    g0 = g1;
  }

  std::sort(roots.begin(), roots.end());
  std::vector<PeriodicPoint> out;
  for (double r : roots) {
    r = wrap01(r);
    if (!out.empty() && std::abs(r - out.back().angle) <= 4 * tol) continue;
    out.push_back({r, minimal_period(map, r, n)});
  }
  if (out.size() > 1 && circle_distance(out.front().angle, out.back().angle) <= 4 * tol) out.pop_back();
  return out;
}

}  // namespace semicov
