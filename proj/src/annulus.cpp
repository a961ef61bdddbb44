#include "semicov/annulus.hpp"

#include <algorithm>
#include <cmath>

#include "semicov/error.hpp"

namespace semicov {

namespace {

constexpr int kCheckX = 65;
constexpr int kCheckY = 256;

}  // namespace

AnnulusMapLift::AnnulusMapLift(BaseFn base, FiberFn fiber, std::string name, std::optional<Interval> band)
    : base_(std::move(base)), fiber_(std::move(fiber)), name_(std::move(name)), band_(band) {
  std::optional<int> degree;
  for (int i = 0; i < kCheckX; ++i) {
    const double x = (i + 0.5) / kCheckX;
    const double px = base_(x);
    if (!(px > 0.0 && px < 1.0)) {
      throw Error(ErrorKind::BaseEscapes, "phi(" + std::to_string(x) + ") = " + std::to_string(px));
    }
    const double g0 = fiber_(x, 0.0);
    const double span = fiber_(x, 1.0) - g0;
    const double rounded = std::round(span);
    if (!std::isfinite(span) || std::abs(span - rounded) > kDegreeTol) {
      throw Error(ErrorKind::NonIntegerDegree, "g_x(1) - g_x(0) = " + std::to_string(span) + " at x = " + std::to_string(x));
    }
    const int d = static_cast<int>(rounded);
    if (degree && *degree != d) throw Error(ErrorKind::DegreeMismatch, "fiber degree changes with x");
    degree = d;
    if (std::abs(d) <= 1) throw Error(ErrorKind::DegreeTooSmall, "degree " + std::to_string(d));
    double prev = g0;
    for (int j = 1; j <= kCheckY; ++j) {
      const double v = fiber_(x, static_cast<double>(j) / kCheckY);
      if (d > 0 ? !(v > prev) : !(v < prev)) {
        throw Error(ErrorKind::FiberNotMonotone, "fiber at x = " + std::to_string(x) + " is not monotone");
      }
      prev = v;
    }
  }
  degree_ = *degree;
}

AnnulusMapLift AnnulusMapLift::unchecked(BaseFn base, FiberFn fiber, int degree, std::string name) {
  AnnulusMapLift m;
  m.base_ = std::move(base);
  m.fiber_ = std::move(fiber);
  m.degree_ = degree;
  m.name_ = std::move(name);
  return m;
}

double AnnulusMapLift::fiber(double x, double y) const {
  const double k = std::floor(y);
  return fiber_(x, y - k) + k * degree_;
}

std::pair<double, double> AnnulusMapLift::operator()(double x, double y) const {
  if (band_ ? !(x >= band_->a && x <= band_->b) : !(x > 0.0 && x < 1.0)) {
    throw Error(ErrorKind::OutOfDomain, "x = " + std::to_string(x));
  }
  return {base_(x), fiber(x, y)};
}

double AnnulusMapLift::fiber_inverse(double x, double v) const {
  const double d = degree_;
  const double g0 = fiber_(x, 0.0);
  const double k = std::floor((v - g0) / d);
  const double r = v - k * d;
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 64 && hi - lo > 0.0; ++it) {
    const double m = 0.5 * (lo + hi);
    if ((fiber_(x, m) < r) == (d > 0)) lo = m; else hi = m;
  }
  return 0.5 * (lo + hi) + k;
}

double AnnulusMapLift::base_inverse(double target) const {
  double lo = 0.0;
  double hi = 1.0;
  const double flo = base_(lo) - target;
  const double fhi = base_(hi) - target;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(flo * fhi < 0.0)) {
    throw Error(ErrorKind::BaseNotInvertible, "phi does not reach " + std::to_string(target) + " on (0,1)");
  }
  const bool rising = flo < 0.0;
  for (int it = 0; it < 64 && hi - lo > 0.0; ++it) {
    const double m = 0.5 * (lo + hi);
    if ((base_(m) < target) == rising) lo = m; else hi = m;
  }
  return 0.5 * (lo + hi);
}

BaseFn base_identity() { return [](double x) { return x; }; }
BaseFn base_affine(double slope, double offset) { return [=](double x) { return slope * x + offset; }; }
BaseFn base_power(double p) { return [=](double x) { return std::pow(x, p); }; }

FiberFn fiber_linear(int d, std::function<double(double)> tau) {
  if (!tau) return [d](double, double y) { return d * y; };
  return [d, tau = std::move(tau)](double x, double y) { return d * y + tau(x); };
}

FiberFn fiber_circle_map(const LiftedCircleMap& map, std::function<double(double)> tau) {
  if (!tau) return [map](double, double y) { return map(y); };
  return [map, tau = std::move(tau)](double x, double y) { return map(y) + tau(x); };
}

AnnulusMapLift make_skew_product(BaseFn base, FiberFn fiber, std::string name) {
  return AnnulusMapLift(std::move(base), std::move(fiber), std::move(name));
}

AnnulusMapLift product_model(int d, BaseFn base) {
  return make_skew_product(std::move(base), fiber_linear(d), "product");
}

AnnulusMapLift pole_example(BaseFn base) {
  return make_skew_product(std::move(base), fiber_linear(2, [](double x) { return 1.0 / (1.0 - x); }), "pole");
}

std::pair<double, double> evaluate_annulus(const AnnulusMapLift& map, double x, double y) { return map(x, y); }

namespace {

double band_sup(const AnnulusMapLift& map, double lo, double hi, int grid) {
  double sup = 0.0;
  const double d = map.degree();
  for (int i = 0; i <= grid; ++i) {
    const double x = lo + (hi - lo) * i / grid;
    for (int j = 0; j < grid; ++j) {
      const double y = static_cast<double>(j) / grid;
      sup = std::max(sup, std::abs(map.fiber(x, y) - d * y));
    }
  }
  return sup;
}

}  // namespace

DisplacementReport displacement_bound(const AnnulusMapLift& map, Interval band, int grid) {
  DisplacementReport r;
  const bool open_lo = band.a <= 0.0;
  const bool open_hi = band.b >= 1.0;
  if (!open_lo && !open_hi) {
    r.sup = band_sup(map, band.a, band.b, grid);
    return r;
  }
  for (int k = 1; k <= 6; ++k) {
    const double m = std::pow(10.0, -k);
    r.margin_sups.push_back(band_sup(map, open_lo ? m : band.a, open_hi ? 1.0 - m : band.b, grid));
  }
  r.sup = r.margin_sups.back();
  bool growing = true;
  for (std::size_t i = 1; i < r.margin_sups.size(); ++i) growing = growing && r.margin_sups[i] > r.margin_sups[i - 1];
  r.diverges = growing && r.margin_sups.back() >= 10.0 * r.margin_sups.front();
  return r;
}

std::vector<std::pair<double, double>> fiber_preimages(const AnnulusMapLift& map, double x_target, double theta,
                                                       double tol) {
  const double x = map.base_inverse(x_target);
  const double d = map.degree();
  const double g0 = map.fiber(x, 0.0);
  std::vector<std::pair<double, double>> out;
  // the |d| lifts theta + m of the target inside g_x([0,1))
  const double lo = d > 0 ? g0 : g0 + d;
  const double first = std::ceil(lo - theta);
  for (int m = 0; m < std::abs(map.degree()); ++m) {
    double y = map.fiber_inverse(x, theta + first + m);
    y = wrap01(y);
    if (std::abs(y - 1.0) < tol) y = 0.0;
    out.emplace_back(x, y);
  }
  std::sort(out.begin(), out.end());
  return out;
}

AnnulusRotation estimate_annulus_rotation(const AnnulusMapLift& map, double x0, double y0, int n_max,
                                          double gap_tol) {
  if (n_max < 2) throw Error(ErrorKind::BadParams, "need at least two iterates");
  AnnulusRotation out;
  const double d = map.degree();
  double x = x0;
  double acc = std::floor(y0);
  double r = y0 - acc;
  double scale = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    if (!(x > 0.0 && x < 1.0)) throw Error(ErrorKind::OrbitEscapes, "x left (0,1) at step " + std::to_string(n));
    const double y = map.fiber(x, r);
    x = map.base(x);
    if (!std::isfinite(y)) throw Error(ErrorKind::OrbitEscapes, "non-finite height at step " + std::to_string(n));
    const double m = std::floor(y);
    scale *= d;
    acc += m / scale;
    r = y - m;
    out.estimates.push_back(acc + r / scale);
  }
  const double last = out.estimates.back();
  for (std::size_t i = out.estimates.size() / 2; i < out.estimates.size(); ++i) {
    out.gap = std::max(out.gap, std::abs(out.estimates[i] - last));
  }
  out.converged = out.gap <= gap_tol;
  return out;
}

}  // namespace semicov
