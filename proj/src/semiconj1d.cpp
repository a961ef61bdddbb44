#include "semicov/semiconj1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "semicov/error.hpp"

namespace semicov {

SemiconjugacyField1D::SemiconjugacyField1D(std::vector<double> samples, int orientation, int degree)
    : samples_(std::move(samples)), orientation_(orientation), degree_(degree) {
  if (samples_.size() < kMinSamples + 1) throw Error(ErrorKind::ValidationError, "field grid too coarse");
  if (orientation_ != 1 && orientation_ != -1) throw Error(ErrorKind::BadParams, "orientation must be +1 or -1");
  samples_.back() = samples_.front() + orientation_;
}

SemiconjugacyField1D SemiconjugacyField1D::linear(std::size_t n, int orientation, int degree) {
  std::vector<double> s(n + 1);
  for (std::size_t i = 0; i <= n; ++i) s[i] = orientation * static_cast<double>(i) / static_cast<double>(n);
  return SemiconjugacyField1D(std::move(s), orientation, degree);
}

double SemiconjugacyField1D::operator()(double x) const {
  const double k = std::floor(x);
  const double n = static_cast<double>(grid_size());
  const double pos = (x - k) * n;
  auto i = static_cast<std::size_t>(pos);
  if (i >= grid_size()) i = grid_size() - 1;
  const double w = pos - static_cast<double>(i);
  const double base = w == 0.0 ? samples_[i] : samples_[i] + w * (samples_[i + 1] - samples_[i]);
  return base + k * orientation_;
}

void SemiconjugacyField1D::set_diagnostics(double residual, double interp_residual, int iterations) {
  residual_ = residual;
  interp_residual_ = interp_residual;
  iterations_ = iterations;
}

double sup_distance(const SemiconjugacyField1D& a, const SemiconjugacyField1D& b) {
  double worst = 0.0;
  if (a.grid_size() == b.grid_size()) {
    for (std::size_t i = 0; i < a.samples_.size(); ++i) worst = std::max(worst, std::abs(a.samples_[i] - b.samples_[i]));
    return worst;
  }
  for (std::size_t i = 0; i <= a.grid_size(); ++i) worst = std::max(worst, std::abs(a.samples_[i] - b(a.node(i))));
  return worst;
}

SemiconjugacyField1D contraction_step(const SemiconjugacyField1D& h, const LiftedCircleMap& map) {
  if (h.degree() != map.degree()) {
    throw Error(ErrorKind::DegreeMismatch,
                "field degree " + std::to_string(h.degree()) + " vs map degree " + std::to_string(map.degree()));
  }
  const double d = map.degree();
  std::vector<double> next(h.grid_size() + 1);
  for (std::size_t i = 0; i <= h.grid_size(); ++i) next[i] = h(map(h.node(i))) / d;
  return SemiconjugacyField1D(std::move(next), h.orientation(), h.degree());
}

std::pair<double, double> measure_residual(const SemiconjugacyField1D& h, const LiftedCircleMap& map) {
  const double d = map.degree();
  double nodes = 0.0;
  for (std::size_t i = 0; i <= h.grid_size(); ++i) {
    const double x = h.node(i);
    nodes = std::max(nodes, std::abs(h(map(x)) - d * h(x)));
  }
  double dense = nodes;
  const std::size_t m = 10 * h.grid_size();
  for (std::size_t i = 0; i < m; ++i) {
    const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(m);
    dense = std::max(dense, std::abs(h(map(x)) - d * h(x)));
  }
  return {nodes, dense};
}

SemiconjugacyField1D solve_semiconjugacy(const LiftedCircleMap& map, int orientation, double tol, int max_iter) {
  if (!(tol > 0.0)) throw Error(ErrorKind::BadParams, "tolerance must be positive");
  const double ad = std::abs(static_cast<double>(map.degree()));
  if (max_iter <= 0) max_iter = static_cast<int>(std::ceil(std::log(tol) / std::log(1.0 / ad))) + 60;
  const double stop = tol * (1.0 - 1.0 / ad);

  auto h = SemiconjugacyField1D::linear(map.grid_size(), orientation, map.degree());
  for (int it = 1; it <= max_iter; ++it) {
    auto next = contraction_step(h, map);
    const double change = sup_distance(next, h);
    h = std::move(next);
    if (change <= stop) {
      auto [nodes, dense] = measure_residual(h, map);
      h.set_diagnostics(nodes, dense, it);
      return h;
    }
  }
  throw Error(ErrorKind::MaxIterExceeded, "no convergence in " + std::to_string(max_iter) + " iterations");
}

namespace {

// Sum of m_k / d^k along y_k = m_k + r_k, r_k in [0,1), for k < n, plus
// tail(r_n) / d^n. Keeps the lift evaluation away from large arguments.
template <class Tail>
double orbit_quotient(const LiftedCircleMap& map, double x, int n, Tail tail) {
  const double d = map.degree();
  double acc = std::floor(x);
  double r = x - acc;
  double scale = 1.0;
  for (int k = 0; k < n; ++k) {
    const double y = map(r);
    const double m = std::floor(y);
    scale *= d;
    acc += m / scale;
    r = y - m;
  }
  return acc + tail(r) / scale;
}

}  // namespace

double rotation_quotient(const LiftedCircleMap& map, double x, int* iterates) {
  const int n = static_cast<int>(std::ceil(15.0 * std::log(10.0) / std::log(std::abs(map.degree())))) + 2;
  if (iterates) *iterates = n;
  return orbit_quotient(map, x, n, [](double r) { return r; });
}

RotationEstimate rotation_number(const LiftedCircleMap& map, const SemiconjugacyField1D& h_plus, double x) {
  if (h_plus.degree() != map.degree()) throw Error(ErrorKind::DegreeMismatch, "field/map degree mismatch");
  // H(x) = H(F^k x) / d^k: pushing the read-out point forward divides the
  // interpolation error of the field by |d|^k.
  const int k = static_cast<int>(std::ceil(6.0 * std::log(10.0) / std::log(std::abs(map.degree()))));
  const double o = h_plus.orientation();
  const double value = orbit_quotient(map, x, k, [&](double r) { return o * h_plus(r); });
  int n = 0;
  const double direct = rotation_quotient(map, x, &n);
  return {value, direct, std::abs(value - direct), n};
}

RotationEstimate rotation_number(const LiftedCircleMap& map, double x) {
  return rotation_number(map, solve_semiconjugacy(map, 1, 1e-12), x);
}

double SelfConjugacy::apply(double angle) const { return wrap01(apply_lift(angle)); }

double SelfConjugacy::apply_lift(double value) const {
  return (reflect ? -value : value) + static_cast<double>(rotation_index) / order;
}

SelfConjugacy SelfConjugacy::compose(const SelfConjugacy& inner) const {
  const int s = reflect ? -1 : 1;
  int j = (rotation_index + s * inner.rotation_index) % order;
  if (j < 0) j += order;
  return {j, reflect != inner.reflect, order};
}

SelfConjugacy SelfConjugacy::inverse() const {
  int j = reflect ? rotation_index : (order - rotation_index) % order;
  return {j, reflect, order};
}

std::vector<SelfConjugacy> self_conjugacies(int d) {
  if (std::abs(d) <= 1) throw Error(ErrorKind::DegreeTooSmall, "degree " + std::to_string(d));
  const int order = std::abs(d - 1);
  std::vector<SelfConjugacy> out;
  for (int reflect = 0; reflect < 2; ++reflect) {
    for (int j = 0; j < order; ++j) out.push_back({j, reflect == 1, order});
  }
  return out;
}

SelfConjugacy relate_semiconjugacies(const SemiconjugacyField1D& h1, const SemiconjugacyField1D& h2, double tol) {
  if (h1.degree() != h2.degree()) throw Error(ErrorKind::DegreeMismatch, "fields of different degree");
  const double accept = 10.0 * tol;
  SelfConjugacy best{};
  double best_err = std::numeric_limits<double>::infinity();
  for (const auto& c : self_conjugacies(h1.degree())) {
    double err = 0.0;
    for (std::size_t i = 0; i <= h1.grid_size() && err <= accept; ++i) {
      const double x = h1.node(i);
      err = std::max(err, circle_distance(h1(x), c.apply(h2(x))));
    }
    if (err < best_err) {
      best_err = err;
      best = c;
    }
  }
  if (best_err > accept) {
    throw Error(ErrorKind::NoRelator, "closest self-conjugacy misses by " + std::to_string(best_err));
  }
  return best;
}

}  // namespace semicov
