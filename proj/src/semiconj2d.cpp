#include "semicov/semiconj2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "semicov/error.hpp"

namespace semicov {

namespace {

constexpr double kEdgeSlack = 1e-12;

}  // namespace

BandField2D::BandField2D(Interval band, std::size_t nx, std::size_t ny, std::vector<double> values, int orientation,
                         int degree)
    : band_(band), nx_(nx), ny_(ny), values_(std::move(values)), orientation_(orientation), degree_(degree) {
  if (!(band_.b > band_.a) || nx_ < 1 || ny_ < 2) throw Error(ErrorKind::ValidationError, "degenerate band grid");
  if (values_.size() != (nx_ + 1) * (ny_ + 1)) throw Error(ErrorKind::ValidationError, "band field size mismatch");
  if (orientation_ != 1 && orientation_ != -1) throw Error(ErrorKind::BadParams, "orientation must be +1 or -1");
  for (std::size_t i = 0; i <= nx_; ++i) {
    values_[i * (ny_ + 1) + ny_] = values_[i * (ny_ + 1)] + orientation_;
    for (std::size_t j = 0; j <= ny_; ++j) {
      const double v = at(i, j);
      if (std::isfinite(v)) deviation_ = std::max(deviation_, std::abs(v - orientation_ * y_node(j)));
    }
  }
}

BandField2D BandField2D::linear(Interval band, std::size_t nx, std::size_t ny, int orientation, int degree) {
  std::vector<double> v((nx + 1) * (ny + 1));
  for (std::size_t i = 0; i <= nx; ++i) {
    for (std::size_t j = 0; j <= ny; ++j) v[i * (ny + 1) + j] = orientation * static_cast<double>(j) / ny;
  }
  return BandField2D(band, nx, ny, std::move(v), orientation, degree);
}

double BandField2D::x_node(std::size_t i) const {
  return band_.a + band_.length() * static_cast<double>(i) / static_cast<double>(nx_);
}

double BandField2D::operator()(double x, double y) const {
  if (!(x >= band_.a - kEdgeSlack && x <= band_.b + kEdgeSlack)) {
    throw Error(ErrorKind::OutOfDomain, "x = " + std::to_string(x) + " outside the band");
  }
  const double u = std::clamp((x - band_.a) / band_.length(), 0.0, 1.0) * static_cast<double>(nx_);
  std::size_t i = std::min(static_cast<std::size_t>(u), nx_ - 1);
  const double wx = u - static_cast<double>(i);
  const double k = std::floor(y);
  const double v = (y - k) * static_cast<double>(ny_);
  std::size_t j = std::min(static_cast<std::size_t>(v), ny_ - 1);
  const double wy = v - static_cast<double>(j);
  auto row = [&](std::size_t r) {
    const double lo = at(r, j);
    return wy == 0.0 ? lo : lo + wy * (at(r, j + 1) - lo);
  };
  const double r0 = row(i);
  const double value = wx == 0.0 ? r0 : r0 + wx * (row(i + 1) - r0);
  return value + k * orientation_;
}

void BandField2D::set_diagnostics(double residual, int iterations) {
  residual_ = residual;
  iterations_ = iterations;
}

double band_residual(const BandField2D& h, const AnnulusMapLift& map) {
  const double d = map.degree();
  double worst = 0.0;
  for (std::size_t i = 0; i <= h.nx(); ++i) {
    const double x = h.x_node(i);
    const double px = map.base(x);
    if (!(px >= h.band().a - kEdgeSlack && px <= h.band().b + kEdgeSlack)) continue;
    for (std::size_t j = 0; j <= h.ny(); ++j) {
      const double v = h(px, map.fiber(x, h.y_node(j))) - d * h.at(i, j);
      if (std::isfinite(v)) worst = std::max(worst, std::abs(v));
    }
  }
  return worst;
}

namespace {

double edge_mean(const BandField2D& h, std::size_t i) {
  double mean = 0.0;
  for (std::size_t j = 0; j < h.ny(); ++j) mean += h.at(i, j) - h.orientation() * h.y_node(j);
  return mean / static_cast<double>(h.ny());
}

// Iterates T on a fixed grid. `closure(x', y', H, mean_lo, mean_hi)`
// supplies H(F) for nodes whose base image leaves the band, given the mean
// deviation of H on the two edge levels.
template <class Closure>
BandField2D iterate_operator(const AnnulusMapLift& map, Interval band, Grid2D grid, int orientation, double tol,
                             int max_iter, Closure closure) {
  const double d = map.degree();
  const double ad = std::abs(d);
  if (max_iter <= 0) max_iter = static_cast<int>(std::ceil(std::log(tol) / std::log(1.0 / ad))) + 60;
  const std::size_t nx = grid.nx, ny = grid.ny;

  std::vector<double> px(nx + 1);
  std::vector<char> inside(nx + 1);
  std::vector<double> fy((nx + 1) * (ny + 1));
  auto h = BandField2D::linear(band, nx, ny, orientation, map.degree());
  for (std::size_t i = 0; i <= nx; ++i) {
    const double x = h.x_node(i);
    px[i] = map.base(x);
    inside[i] = px[i] >= band.a - kEdgeSlack && px[i] <= band.b + kEdgeSlack;
    for (std::size_t j = 0; j <= ny; ++j) fy[i * (ny + 1) + j] = map.fiber(x, h.y_node(j));
  }

  const double stop = tol / ad;
  for (int it = 1; it <= max_iter; ++it) {
    std::vector<double> next((nx + 1) * (ny + 1));
    double change = 0.0;
    const double mean_lo = edge_mean(h, 0);
    const double mean_hi = edge_mean(h, nx);
    for (std::size_t i = 0; i <= nx; ++i) {
      for (std::size_t j = 0; j <= ny; ++j) {
        const double yp = fy[i * (ny + 1) + j];
        const double hv = inside[i] ? h(px[i], yp) : closure(px[i], yp, h, mean_lo, mean_hi);
        const double v = hv / d;
        next[i * (ny + 1) + j] = v;
        change = std::max(change, std::abs(v - h.at(i, j)));
      }
    }
    h = BandField2D(band, nx, ny, std::move(next), orientation, map.degree());
    if (change <= stop) {
      h.set_diagnostics(band_residual(h, map), it);
      return h;
    }
  }
  throw Error(ErrorKind::MaxIterExceeded, "no convergence in " + std::to_string(max_iter) + " iterations");
}

}  // namespace

BandField2D solve_band_semiconjugacy(const AnnulusMapLift& map, Interval band, double tol, int max_iter, Grid2D grid,
                                     int orientation) {
  if (!(tol > 0.0)) throw Error(ErrorKind::BadParams, "tolerance must be positive");
  if (!(band.a > 0.0 && band.b < 1.0 && band.b > band.a)) throw Error(ErrorKind::BadParams, "band must lie in (0,1)");
  for (std::size_t i = 0; i <= grid.nx; ++i) {
    const double x = band.a + band.length() * static_cast<double>(i) / static_cast<double>(grid.nx);
    const double px = map.base(x);
    if (!(px >= band.a - kEdgeSlack && px <= band.b + kEdgeSlack)) {
      throw Error(ErrorKind::BandNotInvariant,
                  "phi(" + std::to_string(x) + ") = " + std::to_string(px) + " leaves the band");
    }
  }
  return iterate_operator(map, band, grid, orientation, tol, max_iter,
                          [](double, double, const BandField2D&, double, double) { return 0.0; });
}

BoundedSolve solve_bounded_semiconjugacy(const AnnulusMapLift& map, Interval truncation, double tol, Grid2D grid,
                                         int max_widenings) {
  if (!(tol > 0.0)) throw Error(ErrorKind::BadParams, "tolerance must be positive");
  if (!(truncation.a > 0.0 && truncation.b < 1.0 && truncation.b > truncation.a)) {
    throw Error(ErrorKind::BadParams, "truncation must lie in (0,1)");
  }
  const auto disp = displacement_bound(map, {0.0, 1.0}, 64);
  if (disp.diverges) {
    throw Error(ErrorKind::DisplacementDiverges,
                "sup |y1 - d y0| grows to " + std::to_string(disp.sup) + " towards the boundary");
  }

  // widen by whole cells so the nodes of the first truncation stay nodes
  const double cell = truncation.length() / static_cast<double>(grid.nx);
  const auto max_lo = static_cast<std::size_t>(std::floor((truncation.a - 1e-9) / cell));
  const auto max_hi = static_cast<std::size_t>(std::floor((1.0 - truncation.b - 1e-9) / cell));

  // closure: o y' + mean deviation of H on the edge level nearest to the exit
  auto closure = [](double xp, double yp, const BandField2D& h, double mean_lo, double mean_hi) {
    return h.orientation() * yp + (xp < h.band().a ? mean_lo : mean_hi);
  };

  std::optional<BandField2D> prev;
  std::vector<Interval> used;
  std::size_t lo_prev = 0, hi_prev = 0;
  double change = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= max_widenings; ++k) {
    const double shrink = 1.0 - std::ldexp(1.0, -k);
    std::size_t lo = std::min(max_lo, static_cast<std::size_t>(std::llround(truncation.a * shrink / cell)));
    std::size_t hi = std::min(max_hi, static_cast<std::size_t>(std::llround((1.0 - truncation.b) * shrink / cell)));
    if (k > 0 && lo == lo_prev && hi == hi_prev) {
      if (lo == max_lo && hi == max_hi) break;
      continue;
    }
    lo_prev = lo;
    hi_prev = hi;
    const Interval band{truncation.a - static_cast<double>(lo) * cell, truncation.b + static_cast<double>(hi) * cell};
    used.push_back(band);
    auto h = iterate_operator(map, band, {grid.nx + lo + hi, grid.ny}, 1, tol, 0, closure);
    if (prev) {
      change = 0.0;
      for (std::size_t i = 0; i <= grid.nx; ++i) {
        const double x = truncation.a + cell * static_cast<double>(i);
        for (std::size_t j = 0; j <= grid.ny; ++j) {
          const double y = h.y_node(j);
          change = std::max(change, std::abs(h(x, y) - (*prev)(x, y)));
        }
      }
      if (change <= tol) return {std::move(h), std::move(used), change, true};
    }
    prev = std::move(h);
  }
  return {std::move(*prev), std::move(used), change, false};
}

bool check_fiber_surjectivity(const BandField2D& h, double x_level, double max_gap) {
  const std::size_t m = 8 * h.ny();
  std::vector<double> v(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double value = h(x_level, static_cast<double>(j) / static_cast<double>(m));
    if (!std::isfinite(value)) return false;
    v[j] = wrap01(value);
  }
  std::sort(v.begin(), v.end());
  double gap = v.front() + 1.0 - v.back();
  for (std::size_t j = 1; j < m; ++j) gap = std::max(gap, v[j] - v[j - 1]);
  return gap <= max_gap;
}

ConnectorCheck check_fiber_connector(const BandField2D& h, double z, double tol) {
  ConnectorCheck out;
  for (std::size_t i = 0; i <= h.nx(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    bool defined = true;
    for (std::size_t j = 0; j < h.ny() && best > 0.0; ++j) {
      const double v0 = h.at(i, j), v1 = h.at(i, j + 1);
      if (!std::isfinite(v0) || !std::isfinite(v1)) {
        defined = false;
        break;
      }
      // the segment crosses a lift of z
      if (std::floor(std::max(v0, v1) - z) > std::floor(std::min(v0, v1) - z) ||
          std::min(v0, v1) - z == std::floor(std::min(v0, v1) - z)) {
        best = 0.0;
      } else {
        best = std::min({best, circle_distance(v0, z), circle_distance(v1, z)});
      }
    }
    if (!defined) {
      out.ok = false;
      out.domain_gap = true;
      if (!out.failing_level) out.failing_level = i;
      continue;
    }
    if (best > tol) {
      out.ok = false;
      if (!out.failing_level) out.failing_level = i;
    }
  }
  return out;
}

FixedPointEquality fixed_point_h_equality(const AnnulusMapLift& map, const BandField2D& h,
                                          std::pair<double, double> p, std::pair<double, double> q, double tol) {
  for (auto [x, y] : {p, q}) {
    const auto [fx, fy] = map(x, y);
    if (std::abs(fx - x) > tol || circle_distance(fy, y) > tol) {
      throw Error(ErrorKind::NotFixed, "(" + std::to_string(x) + ", " + std::to_string(y) + ") is not fixed");
    }
  }
  FixedPointEquality out;
  out.equal = circle_distance(h(p.first, p.second), h(q.first, q.second)) <= tol;

  // F - (0, t) fixes p~; then F(q~ - (0,l)) - (q~ - (0,l)) = s - l (d - 1)
  const double d = map.degree();
  const double t = std::round(map.fiber(p.first, p.second) - p.second);
  const double s = map.fiber(q.first, q.second) - q.second - t;
  const long reach = 2 * static_cast<long>(std::ceil(h.deviation_bound() + 1.0));
  for (long l = -reach; l <= reach; ++l) {
    if (std::abs(s - static_cast<double>(l) * (d - 1.0)) <= 10.0 * tol) {
      out.lift_witness = l;
      break;
    }
  }
  out.inconclusive = out.equal != out.lift_witness.has_value();
  return out;
}

}  // namespace semicov
