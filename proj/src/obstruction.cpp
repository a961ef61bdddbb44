#include "semicov/obstruction.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "semicov/error.hpp"
#include "semicov/semiconj2d.hpp"

namespace semicov {

namespace {

// Fiber component of F^n over the base orbit starting at `orbit[0]`.
double compose(const AnnulusMapLift& map, const std::vector<double>& orbit, double y) {
  for (double x : orbit) y = map.fiber(x, y);
  return y;
}

double compose_inverse(const AnnulusMapLift& map, const std::vector<double>& orbit, double v) {
  for (auto it = orbit.rbegin(); it != orbit.rend(); ++it) v = map.fiber_inverse(*it, v);
  return v;
}

std::vector<double> base_orbit(const AnnulusMapLift& map, double x, int n) {
  std::vector<double> orbit;
  for (int k = 0; k < n; ++k) {
    orbit.push_back(x);
    x = map.base(x);
  }
  return orbit;
}

long ipow(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

WindingRecord lift_loop_winding(const AnnulusMapLift& map, const LoopSpec& loop, int n, long j,
                                std::pair<double, double> start, Interval k, double tol) {
  if (n < 1 || j < 1) throw Error(ErrorKind::BadParams, "need n >= 1 and j >= 1");
  const auto [xs, ys] = start;
  if (xs < k.a || xs > k.b) {
    throw Error(ErrorKind::EndpointOutsideK, "start x = " + std::to_string(xs) + " outside K");
  }
  const auto orbit = base_orbit(map, xs, n);
  double xn = xs;
  for (int i = 0; i < n; ++i) xn = map.base(xn);
  const double v0 = compose(map, orbit, ys);
  if (std::abs(xn - loop.x0) > 1e3 * tol || circle_distance(v0, loop.theta0) > 1e3 * tol) {
    throw Error(ErrorKind::BadParams, "start is not an f^n-preimage of the loop's base point");
  }

  constexpr double kMaxStep = 1.0 / 16.0;
  constexpr int kWindowSamples = 32;
  WindingRecord rec{n, j, start, ys, ys, 0, 0.0};
  double w = ys;
  double s = 0.0;
  double ds = kMaxStep;
  const auto total = static_cast<double>(j);
  while (s < total) {
    const double step = std::min(ds, total - s);
    const double v = v0 + s + step;
    // roots of G - v near the current point; accept only an unambiguous one
    double prev_w = w - 0.5;
    double prev_g = compose(map, orbit, prev_w) - v;
    int roots = 0;
    double lo = 0.0, hi = 0.0;
    for (int q = 1; q <= kWindowSamples; ++q) {
      const double cw = w - 0.5 + static_cast<double>(q) / kWindowSamples;
      const double cg = compose(map, orbit, cw) - v;
      if ((prev_g <= 0.0) != (cg <= 0.0)) {
        ++roots;
        lo = prev_w;
        hi = cw;
      }
      prev_w = cw;
      prev_g = cg;
    }
    if (roots != 1) {
      ds *= 0.5;
      if (ds < 1e-12) {
        throw Error(ErrorKind::BranchAmbiguity, "n = " + std::to_string(n) + ", j = " + std::to_string(j) +
                                                    ": continuation stuck at s = " + std::to_string(s));
      }
      continue;
    }
    const bool rising = compose(map, orbit, hi) > v;
    for (int it = 0; it < 64 && hi - lo > 0.0; ++it) {
      const double m = 0.5 * (lo + hi);
      if ((compose(map, orbit, m) < v) == rising) lo = m; else hi = m;
    }
    w = 0.5 * (lo + hi);
    rec.push_error = std::max(rec.push_error, std::abs(compose(map, orbit, w) - v));
    s += step;
    ds = std::min(2.0 * ds, kMaxStep);
  }
  rec.y2 = w;
  rec.winding = std::labs(static_cast<long>(std::floor(rec.y2)) - static_cast<long>(std::floor(rec.y1)));
  return rec;
}

WindingReport star_condition_scan(const AnnulusMapLift& map, Interval k, const LoopSpec& loop, int n_max,
                                  std::optional<double> m) {
  if (n_max < 1) throw Error(ErrorKind::BadParams, "n_max must be >= 1");
  WindingReport report;
  report.k = k;
  report.loop = loop;
  report.m = m ? *m : solve_band_semiconjugacy(map, k, 1e-8, 0, {32, 256}).deviation_bound();
  report.bound = 2.0 * report.m + 1.0;

  const long d = std::labs(map.degree());
  double x = loop.x0;
  for (int n = 1; n <= n_max; ++n) {
    x = map.base_inverse(x);
    const auto orbit = base_orbit(map, x, n);
    const long pieces = ipow(d, n);
    std::set<long> js{1, (ipow(d, n - 1) + 1) / 2, ipow(d, n - 1)};
    long worst = 0;
    for (long q = 0; q < pieces; ++q) {
      const double y = compose_inverse(map, orbit, loop.theta0 + static_cast<double>(q));
      for (long j : js) {
        auto rec = lift_loop_winding(map, loop, n, j, {x, y}, k);
        worst = std::max(worst, rec.winding);
        report.records.push_back(rec);
      }
    }
    report.max_winding.push_back(worst);
    report.within_bound = report.within_bound && static_cast<double>(worst) <= report.bound;
  }
  return report;
}

BandModel build_band_model(int n) {
  if (n < 1) throw Error(ErrorKind::BadParams, "band model needs n >= 1");
  BandModel b;
  b.n = n;
  // a_k = 1 / (1 + 2^{-k}): increasing, tends to 0 and 1 at the two ends
  for (int k = 0; k <= n + 1; ++k) b.radii.push_back(1.0 / (1.0 + std::ldexp(1.0, -k)));
  const double a0 = b.radii[0], a1 = b.radii[1];
  const double mult = std::ldexp(1.0, n - 1);  // f^{n-1} is z -> z^{2^{n-1}} on A_0

  b.alpha_start = {a0, 0.0};
  b.alpha_end = {a1, static_cast<double>(n)};
  b.beta_start = {b.radii[static_cast<std::size_t>(n - 1)], mult * b.alpha_start.second};
  b.beta_end = {b.radii[static_cast<std::size_t>(n)], mult * b.alpha_end.second};
  // alpha' is the branch of f^{-(n-1)}(beta') through height t = (1/2) / 2^{n-1}
  b.t = 0.5 / mult;
  b.alpha_prime_start = {a0, b.t};
  b.alpha_prime_end = {a1, n + b.t};
  b.y_height = n + 0.5 * b.t;
  b.x_height = 0.25;
  b.lower_bound = n - 1;

  auto require = [&](bool ok, const char* what) {
    if (!ok) b.failed.emplace_back(what);
  };
  auto on_turn = [](double h, double target) { return circle_distance(h, target) < 1e-12; };
  for (std::size_t i = 1; i < b.radii.size(); ++i) require(b.radii[i] > b.radii[i - 1], "radii increase");
  require(b.alpha_end.second == n, "alpha_0 ends at height n");
  require(on_turn(b.beta_start.second, 0.0) && on_turn(b.beta_end.second, 0.0), "beta joins z = 1 points");
  require(on_turn(mult * b.alpha_prime_start.second, b.beta_prime_height) &&
              on_turn(mult * b.alpha_prime_end.second, b.beta_prime_height),
          "f^{n-1}(alpha') lies on beta'");
  require(!on_turn(b.t, 0.0), "alpha' is disjoint from alpha");
  require(b.y_height > n && b.y_height <= b.alpha_prime_end.second && b.y_height >= b.alpha_prime_start.second,
          "Y' on alpha'_0 above n");
  require(b.x_height < 0.5 && b.x_height >= b.alpha_start.second && b.x_height <= b.alpha_end.second,
          "X' on alpha_0 below 1/2");
  require(b.y_height - b.x_height > n - 1, "Y' - X' exceeds n - 1");
  return b;
}

std::vector<GrowthRow> counterexample_growth_table(int n_max) {
  if (n_max < 2) throw Error(ErrorKind::BadParams, "n_max must be >= 2");
  std::vector<GrowthRow> rows;
  for (int n = 2; n <= n_max; ++n) {
    const auto b = build_band_model(n);
    rows.push_back({n, b.lower_bound, b.failed.empty()});
  }
  return rows;
}

}  // namespace semicov
