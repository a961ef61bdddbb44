#include "semicov/connectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "semicov/error.hpp"

namespace semicov {

ConnectorCurve::ConnectorCurve(std::vector<double> xs, std::vector<double> ys, double margin)
    : xs_(std::move(xs)), ys_(std::move(ys)), margin_(margin) {
  if (xs_.size() < 2 || xs_.size() != ys_.size()) throw Error(ErrorKind::ValidationError, "connector needs >= 2 samples");
  for (std::size_t i = 1; i < xs_.size(); ++i) {
    if (!(xs_[i] > xs_[i - 1])) throw Error(ErrorKind::ValidationError, "connector samples must increase in x");
  }
}

ConnectorCurve ConnectorCurve::horizontal(double height, std::size_t n, double margin) {
  std::vector<double> xs(n + 1), ys(n + 1, height);
  for (std::size_t i = 0; i <= n; ++i) xs[i] = margin + (1.0 - 2.0 * margin) * static_cast<double>(i) / n;
  return ConnectorCurve(std::move(xs), std::move(ys), margin);
}

double ConnectorCurve::operator()(double x) const {
  if (x <= xs_.front()) return ys_.front();
  if (x >= xs_.back()) return ys_.back();
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const auto i = static_cast<std::size_t>(std::distance(xs_.begin(), it)) - 1;
  const double w = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
  return ys_[i] + w * (ys_[i + 1] - ys_[i]);
}

double ConnectorCurve::max_jump() const {
  double m = 0.0;
  for (std::size_t i = 1; i < ys_.size(); ++i) m = std::max(m, std::abs(ys_[i] - ys_[i - 1]));
  return m;
}

namespace {

// Uniform x samples of [margin, 1 - margin] whose base image lies in [lo, hi].
std::vector<double> pullback_domain(const AnnulusMapLift& map, double lo, double hi, std::size_t n, double margin) {
  std::vector<double> xs;
  double prev = std::numeric_limits<double>::quiet_NaN();
  int direction = 0;
  for (std::size_t i = 0; i <= 4 * n; ++i) {
    const double x = margin + (1.0 - 2.0 * margin) * static_cast<double>(i) / static_cast<double>(4 * n);
    const double px = map.base(x);
    if (!std::isnan(prev)) {
      const int s = px > prev ? 1 : (px < prev ? -1 : 0);
      if (s == 0 || (direction != 0 && s != direction)) {
        throw Error(ErrorKind::BaseNotInvertible, "base is not strictly monotone near x = " + std::to_string(x));
      }
      direction = s;
    }
    prev = px;
    if (px >= lo && px <= hi) xs.push_back(x);
  }
  if (xs.size() < 2) throw Error(ErrorKind::BaseNotInvertible, "no x maps into the connector's range");
  return xs;
}

// For d < -1 the |d| gaps of f^{-1}(C) hold |d| + 1 repellers, so one gap
// carries two. Each repeller is pinned instead by its lift shift t, the
// itinerary fixed by one extra preimage level: Gamma <- g_x^{-1}(Gamma(phi x) + t).
Repellers reversing_repellers(const AnnulusMapLift& map, const ConnectorCurve& c, int depth, Repellers out) {
  const int d = map.degree();
  const auto& xs = c.xs();
  for (int t = 0; t < std::abs(d - 1); ++t) {
    std::vector<double> ys(xs.size(), static_cast<double>(t) / (d - 1));
    ConnectorCurve gamma(xs, ys, c.margin());
    std::vector<double> gaps;
    for (int n = 0; n < depth; ++n) {
      std::vector<double> next(xs.size());
      double gap = 0.0;
      for (std::size_t k = 0; k < xs.size(); ++k) {
        next[k] = map.fiber_inverse(xs[k], gamma(map.base(xs[k])) + t);
        gap = std::max(gap, std::abs(next[k] - gamma.ys()[k]));
      }
      gamma = ConnectorCurve(xs, std::move(next), c.margin());
      gaps.push_back(gap);
    }
    out.curves.push_back(std::move(gamma));
    out.gap_index.push_back(-1);
    out.lift_shift.push_back(t);
    out.gaps.push_back(std::move(gaps));
  }
  return out;
}

}  // namespace

std::vector<ConnectorCurve> preimage_connectors(const AnnulusMapLift& map, const ConnectorCurve& c) {
  const auto xs = pullback_domain(map, c.x_min(), c.x_max(), c.xs().size(), c.margin());
  const int n = std::abs(map.degree());
  std::vector<std::vector<double>> ys(static_cast<std::size_t>(n), std::vector<double>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double target = c(map.base(xs[i]));
    for (int m = 0; m < n; ++m) ys[static_cast<std::size_t>(m)][i] = map.fiber_inverse(xs[i], target + m);
    // consecutive branches and the wrap-around pair must stay apart
    std::vector<double> level;
    for (int m = 0; m < n; ++m) level.push_back(ys[static_cast<std::size_t>(m)][i]);
    std::sort(level.begin(), level.end());
    level.push_back(level.front() + 1.0);
    for (std::size_t k = 1; k < level.size(); ++k) {
      if (level[k] - level[k - 1] < 1e-9) {
        throw Error(ErrorKind::BranchCollision, "preimage branches meet at x = " + std::to_string(xs[i]));
      }
    }
  }
  std::vector<ConnectorCurve> out;
  for (auto& y : ys) out.emplace_back(xs, std::move(y), c.margin());
  return out;
}

bool is_free(const AnnulusMapLift& map, const ConnectorCurve& c, double tol) {
  std::vector<std::pair<double, double>> image;
  for (std::size_t i = 0; i < c.xs().size(); ++i) {
    const double x = c.xs()[i];
    image.emplace_back(map.base(x), map.fiber(x, c.ys()[i]));
  }
  if (image.back().first < image.front().first) std::reverse(image.begin(), image.end());
  for (std::size_t i = 1; i < image.size(); ++i) {
    if (!(image[i].first > image[i - 1].first)) throw Error(ErrorKind::ImageNotGraph, "f(C) is not a graph over x");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [x, y] : image) {
    if (x < c.x_min() || x > c.x_max()) continue;
    best = std::min(best, circle_distance(y, c(x)));
  }
  // also compare at C's own samples inside the image range, which catches
  // crossings between image samples
  ConnectorCurve img([&] {
    std::vector<double> v;
    for (const auto& p : image) v.push_back(p.first);
    return v;
  }(), [&] {
    std::vector<double> v;
    for (const auto& p : image) v.push_back(p.second);
    return v;
  }(), c.margin());
  for (std::size_t i = 0; i < c.xs().size(); ++i) {
    const double x = c.xs()[i];
    if (x < img.x_min() || x > img.x_max()) continue;
    best = std::min(best, circle_distance(img(x), c.ys()[i]));
  }
  return best > tol;
}

InvariantConnector invariant_connector_from_arc(const AnnulusMapLift& map, std::pair<double, double> p, int n_back,
                                                int n_fwd, std::size_t samples, double margin) {
  const auto [px, py] = p;
  const auto [qx, qy] = map(px, py);
  if (!(qx > px)) {
    throw Error(ErrorKind::NotMonotoneBase, "x does not increase from p to f(p): " + std::to_string(px) + " -> " +
                                                std::to_string(qx));
  }
  // piece n is F^n(gamma) (backward lifts for n < 0), all parametrized by
  // gamma's t so that F maps samples of piece n onto samples of piece n + 1
  auto point = [&](int n, double t) -> std::optional<std::pair<double, double>> {
    double x = px + t * (qx - px);
    double y = py + t * (qy - py);
    for (int k = 0; k < n; ++k) {
      y = map.fiber(x, y);
      x = map.base(x);
    }
    for (int k = 0; k < -n; ++k) {
      try {
        x = map.base_inverse(x);
      } catch (const Error&) {
        return std::nullopt;  // phi does not reach x
      }
      y = map.fiber_inverse(x, y);
    }
    if (!std::isfinite(y)) return std::nullopt;
    return std::pair{x, y};
  };

  std::vector<int> pieces{0};
  for (int n = 1; n <= n_fwd; ++n) {
    const auto start = point(n, 0.0);
    if (!start || !(start->first < 1.0 - margin)) break;
    pieces.push_back(n);
  }
  for (int n = 1; n <= n_back; ++n) {
    const auto end = point(-n, 1.0);
    if (!end || !(end->first > margin)) break;
    pieces.push_back(-n);
  }

  std::vector<double> ts;
  for (std::size_t k = 0; k <= samples; ++k) ts.push_back(static_cast<double>(k) / static_cast<double>(samples));
  // parameters where a piece crosses a margin, so the cut is a sample of every piece
  for (int n : pieces) {
    for (double edge : {margin, 1.0 - margin}) {
      auto x_at = [&](double t) {
        const auto q = point(n, t);
        return q ? q->first : -1.0;
      };
      double lo = 0.0, hi = 1.0;
      if (!((x_at(lo) - edge) * (x_at(hi) - edge) < 0.0)) continue;
      const bool rising = x_at(lo) < edge;
      for (int it = 0; it < 60; ++it) {
        const double m = 0.5 * (lo + hi);
        if ((x_at(m) < edge) == rising) lo = m; else hi = m;
      }
      ts.push_back(x_at(hi) >= margin && x_at(hi) <= 1.0 - margin ? hi : lo);
    }
  }
  std::sort(ts.begin(), ts.end());

  std::vector<std::pair<double, double>> all;
  for (int n : pieces) {
    for (double t : ts) {
      if (const auto q = point(n, t); q && q->first >= margin && q->first <= 1.0 - margin) all.push_back(*q);
    }
  }
  std::sort(all.begin(), all.end());
  std::vector<double> xs, ys;
  for (const auto& [x, y] : all) {
    if (!xs.empty() && x - xs.back() <= 1e-14) continue;  // shared endpoints
    xs.push_back(x);
    ys.push_back(y);
  }
  ConnectorCurve curve(std::move(xs), std::move(ys), margin);

  InvariantConnector out{curve, 0.0, 0.0, false};
  auto residual_at = [&](double x) {
    const double y = curve(x);
    const double fx = map.base(x);
    if (fx < curve.x_min() || fx > curve.x_max()) return 0.0;
    return std::abs(map.fiber(x, y) - curve(fx));
  };
  for (std::size_t i = 0; i < curve.xs().size(); ++i) {
    out.residual = std::max(out.residual, residual_at(curve.xs()[i]));
    if (i + 1 < curve.xs().size()) {
      out.dense_residual =
          std::max(out.dense_residual, residual_at(0.5 * (curve.xs()[i] + curve.xs()[i + 1])));
    }
  }
  out.boundary_accumulating = curve.x_min() <= 1.01 * margin && curve.x_max() >= 1.0 - 1.01 * margin;
  return out;
}
Repellers repelling_connectors(const AnnulusMapLift& map, const ConnectorCurve& c, int depth) {
  const int d = map.degree();
  if (depth < 1) throw Error(ErrorKind::BadParams, "depth must be >= 1");
  if (!is_free(map, c)) throw Error(ErrorKind::NotFree, "f(C) meets C");

  const auto& xs = c.xs();
  Repellers out;
  out.expansion = std::numeric_limits<double>::infinity();
  const int ny = 256;
  for (double x : xs) {
    for (int j = 0; j < ny; ++j) {
      const double y0 = static_cast<double>(j) / ny;
      out.expansion = std::min(out.expansion, std::abs(map.fiber(x, y0 + 1.0 / ny) - map.fiber(x, y0)) * ny);
    }
  }
  if (!(out.expansion > 1.0)) {
    throw Error(ErrorKind::NoExpansion, "fiber slope drops to " + std::to_string(out.expansion));
  }

  if (d < 0) return reversing_repellers(map, c, depth, std::move(out));

  // gap i at x is (w_i, w_{i+1}) with w_m = g_x^{-1}(c(phi x) + m); C sits in
  // the gap containing c(x) + k
  auto gap_of = [&](double x, double y) {
    const double base = map.fiber_inverse(x, c(map.base(x)));
    const double v = map.fiber(x, y - std::floor(y - base));
    return static_cast<int>(std::floor(v - c(map.base(x))));
  };
  const int c_gap = gap_of(xs.front(), c.ys().front());
  for (double x : xs) {
    if (gap_of(x, c(x)) != c_gap) throw Error(ErrorKind::NotFree, "C changes gap along x");
  }

  for (int i = 0; i < d; ++i) {
    if (i == c_gap) continue;
    std::vector<double> ys(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double x = xs[k];
      const double target = c(map.base(x));
      ys[k] = 0.5 * (map.fiber_inverse(x, target + i) + map.fiber_inverse(x, target + i + 1));
    }
    ConnectorCurve gamma(xs, ys, c.margin());
    std::vector<double> gaps;
    for (int n = 0; n < depth; ++n) {
      std::vector<double> next(xs.size());
      double gap = 0.0;
      for (std::size_t k = 0; k < xs.size(); ++k) {
        const double x = xs[k];
        const double fx = map.base(x);
        const double v = gamma(fx);
        const double shift = static_cast<double>(i) - std::floor(v - c(fx));
        next[k] = map.fiber_inverse(x, v + shift);
        gap = std::max(gap, std::abs(next[k] - gamma.ys()[k]));
      }
      gamma = ConnectorCurve(xs, std::move(next), c.margin());
      gaps.push_back(gap);
    }
    const double mid = xs[xs.size() / 2];
    const long t = std::lround(map.fiber(mid, gamma(mid)) - gamma(map.base(mid)));
    out.curves.push_back(std::move(gamma));
    out.gap_index.push_back(i);
    out.lift_shift.push_back(t);
    out.gaps.push_back(std::move(gaps));
  }
  return out;
}

RepellerField semiconjugacy_from_repellers(const AnnulusMapLift& map, const Repellers& repellers, int depth,
                                           Interval band, Grid2D grid) {
  const int d = map.degree();
  if (d < 2) throw Error(ErrorKind::BadParams, "repeller coding needs d > 1");
  if (repellers.curves.empty()) throw Error(ErrorKind::BadParams, "no repellers");
  if (depth < 1) throw Error(ErrorKind::BadParams, "depth must be >= 1");
  const double dm1 = d - 1.0;
  const std::size_t r = repellers.curves.size();

  const double scale = std::pow(static_cast<double>(d), depth);
  // midpoint of the value interval of the lifted repeller pair enclosing F^depth(x, u)
  auto code = [&](double x, double u) {
    for (int k = 0; k < depth; ++k) {
      u = map.fiber(x, u);
      x = map.base(x);
    }
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    double vlo = 0.0, vhi = 0.0;
    for (std::size_t q = 0; q < r; ++q) {
      const double height = repellers.curves[q](x);
      const double value = static_cast<double>(repellers.lift_shift[q]) / dm1;
      const double m = std::floor(u - height);
      if (height + m > lo) {
        lo = height + m;
        vlo = value + m;
      }
      if (height + m + 1.0 < hi) {
        hi = height + m + 1.0;
        vhi = value + m + 1.0;
      }
    }
    return 0.5 * (vlo + vhi) / scale;
  };

  std::vector<double> values((grid.nx + 1) * (grid.ny + 1));
  double residual = 0.0;
  for (std::size_t i = 0; i <= grid.nx; ++i) {
    const double x = band.a + band.length() * static_cast<double>(i) / static_cast<double>(grid.nx);
    for (std::size_t j = 0; j <= grid.ny; ++j) {
      const double y = static_cast<double>(j) / static_cast<double>(grid.ny);
      const double h = code(x, y);
      values[i * (grid.ny + 1) + j] = h;
      residual = std::max(residual, std::abs(code(map.base(x), map.fiber(x, y)) - d * h));
    }
  }
  BandField2D field(band, grid.nx, grid.ny, std::move(values), 1, d);
  field.set_diagnostics(residual, depth);
  const double half = 0.5 / (dm1 * scale);
  return {std::move(field), residual, half, std::pow(static_cast<double>(d), 1 - depth) >= 1.0};
}

}  // namespace semicov
