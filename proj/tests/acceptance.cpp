// One line per acceptance criterion: [PASS] or [FAIL], the measured values and
// the wall time. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "semicov/annulus.hpp"
#include "semicov/circle_map.hpp"
#include "semicov/classify1d.hpp"
#include "semicov/connectors.hpp"
#include "semicov/error.hpp"
#include "semicov/obstruction.hpp"
#include "semicov/semiconj1d.hpp"
#include "semicov/semiconj2d.hpp"
#include "semicov/stability.hpp"

using namespace semicov;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// d(TH1, TH2) / d(H1, H2) over random pairs in H^+ for a nonlinear covering
Outcome operator_contraction() {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 0.3);
  const std::size_t n = 4096;
  double worst_excess = -1.0;
  for (int d : {2, 3}) {
    const auto map = make_sine(d, 0.1, n);
    auto field = [&] {
      const double a = g(rng), b = g(rng), c = g(rng);
      std::vector<double> s(n + 1);
      for (std::size_t i = 0; i <= n; ++i) {
        const double x = static_cast<double>(i) / n;
        s[i] = x + a * std::sin(2 * std::numbers::pi * x) + b * std::cos(10 * std::numbers::pi * x) + c;
      }
      return SemiconjugacyField1D(std::move(s), 1, d);
    };
    for (int k = 0; k < 20; ++k) {
      const auto h1 = field(), h2 = field();
      const double ratio = sup_distance(contraction_step(h1, map), contraction_step(h2, map)) / sup_distance(h1, h2);
      worst_excess = std::max(worst_excess, ratio - 1.0 / d);
    }
  }
  return {worst_excess <= 0.01, fmt("max ratio - 1/|d| = %.3g (limit 0.01)", worst_excess)};
}

Outcome model_fixed_point() {
  double dev = 0.0, res = 0.0;
  for (int d : {2, 3, 4, -2}) {
    const auto h = solve_semiconjugacy(make_linear(d), 1, 1e-10);
    for (std::size_t i = 0; i <= h.grid_size(); ++i) dev = std::max(dev, std::abs(h.samples()[i] - h.node(i)));
    res = std::max(res, h.residual());
  }
  return {dev <= 1e-9 && res <= 1e-9, fmt("sup|H - id| = %.3g, residual = %.3g (limits 1e-9)", dev, res)};
}

Outcome shift_law() {
  double worst = 0.0;
  for (int d : {2, 3, 4}) {
    const auto f = make_sine(d, 0.1);
    const auto g = f.shifted(1.0);
    const auto hf = solve_semiconjugacy(f, 1, 1e-12);
    const auto hg = solve_semiconjugacy(g, 1, 1e-12);
    for (int i = 0; i < 1000; ++i) {
      const double x = i / 1000.0;
      const double diff = rotation_number(g, hg, x).value - rotation_number(f, hf, x).value;
      worst = std::max(worst, std::abs(diff - 1.0 / (d - 1)));
    }
  }
  return {worst <= 1e-6, fmt("max |rho_{F+1} - rho_F - 1/(d-1)| = %.3g (limit 1e-6)", worst)};
}

Outcome affine_oracle() {
  double worst = 0.0;
  for (int d : {2, 3, 5}) {
    for (double c : {0.0, 0.17, 0.5, 0.93}) {
      const auto h = solve_semiconjugacy(make_linear(d, c), 1, 1e-10);
      for (int i = 0; i <= 1000; ++i) {
        const double x = i / 1000.0;
        worst = std::max(worst, std::abs(h(x) - (x + c / (d - 1))));
      }
    }
  }
  return {worst <= 1e-8, fmt("max |H - (x + c/(d-1))| = %.3g (limit 1e-8)", worst)};
}

Outcome self_conjugacy_group() {
  bool ok = true;
  double worst = 0.0;
  for (int d : {2, 3, 4, 5, -2, -3}) {
    const auto g = self_conjugacies(d);
    const int order = std::abs(d - 1);
    ok = ok && g.size() == static_cast<std::size_t>(2 * order);
    const SelfConjugacy id{0, false, order};
    ok = ok && std::find(g.begin(), g.end(), id) != g.end();
    for (const auto& a : g) {
      for (int i = 0; i < 1000; ++i) {
        const double z = i / 1000.0;
        worst = std::max(worst, circle_distance(a.apply(wrap01(d * z)), wrap01(d * a.apply(z))));
      }
      ok = ok && a.compose(a.inverse()) == id && a.compose(id) == a;
      for (const auto& b : g) {
        ok = ok && std::find(g.begin(), g.end(), a.compose(b)) != g.end();
        for (const auto& c : g) ok = ok && a.compose(b.compose(c)) == a.compose(b).compose(c);
        // the composite acts as the composition of actions
        for (double z : {0.1, 0.37, 0.8}) ok = ok && circle_distance(a.compose(b).apply(z), a.apply(b.apply(z))) < 1e-12;
      }
    }
  }
  ok = ok && worst <= 1e-12;
  return {ok, std::string("sizes and group axioms ") + (ok ? "ok" : "FAILED") +
                  fmt(", max |c(z^d) - c(z)^d| = %.3g (limit 1e-12)", worst)};
}

IntervalSignature expected_signature(InsertKind k) {
  IntervalSignature s;
  switch (k) {
    case InsertKind::Identity: s.identity = true; break;
    case InsertKind::NorthSouth: s.fixed_point_count = 3; s.sign_pattern = {-1, 1, -1, 1}; break;
    case InsertKind::SouthNorth:
      s.fixed_point_count = 3;
      s.sign_pattern = {-1, -1, 1, 1};
      s.left_attracting = s.right_attracting = true;
      break;
    case InsertKind::Shift:
      s.fixed_point_count = 2;
      s.sign_pattern = {-1, 1, 1};
      s.right_attracting = true;
      break;
  }
  return s;
}

Outcome classification_round_trip() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_real_distribution<double> len(0.03, 0.07);
  int specs = 0, angle_fail = 0, sig_fail = 0, equiv_fail = 0, distinct_fail = 0, reflected = 0;
  while (specs < 10) {
    const int d = 2 + coin(rng);
    std::vector<Insertion> ins;
    const int count = 1 + coin(rng);
    for (int i = 0; i < count; ++i) {
      const int n = std::uniform_int_distribution<int>(1, 3)(rng);
      const int q = static_cast<int>(std::pow(d, n)) - 1;
      const int k = std::uniform_int_distribution<int>(0, q - 1)(rng);
      ins.push_back({static_cast<double>(k) / q, len(rng), static_cast<InsertKind>(std::uniform_int_distribution<int>(0, 3)(rng))});
    }
    std::optional<BlowUp> built;
    try {
      built.emplace(blow_up_detailed(d, ins));
    } catch (const Error&) {
      continue;  // overlapping insertions: draw again
    }
    const BlowUp& bu = *built;
    ++specs;
    const auto data = classification_data(bu.map);
    for (const auto& in : ins) {
      // nearest record: wandering preimages of other insertions can also land
      // within the angle tolerance
      const PlateauRecord* hit = nullptr;
      for (const auto& r : data.records) {
        const double dist = circle_distance(r.image_angle, in.base_angle);
        if (dist <= 1e-3 && (!hit || dist < circle_distance(hit->image_angle, in.base_angle))) hit = &r;
      }
      if (!hit) ++angle_fail;
      else if (!(hit->signature == expected_signature(in.kind))) ++sig_fail;
    }
    for (const auto& r : data.records) {
      bool near = false;
      for (const auto& iv : bu.intervals) near = near || circle_distance(iv.angle, r.image_angle) <= 1e-3;
      if (!near) ++angle_fail;
    }

    // rotations act on the inserted angles; reflections also reverse the
    // profiles, so they are used only when every profile is symmetric
    const bool symmetric = std::all_of(ins.begin(), ins.end(), [](const Insertion& i) { return i.kind != InsertKind::Shift; });
    std::vector<SelfConjugacy> pool;
    for (const auto& c : self_conjugacies(d)) {
      if (!c.reflect || symmetric) pool.push_back(c);
    }
    const auto c = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    reflected += c.reflect ? 1 : 0;
    auto moved = ins;
    for (auto& in : moved) in.base_angle = c.apply(in.base_angle);
    if (compare_classification(data, classification_data(blow_up(d, moved))).kind != Verdict::Kind::Equivalent) ++equiv_fail;

    auto altered = ins;
    altered[0].kind = altered[0].kind == InsertKind::NorthSouth ? InsertKind::Identity : InsertKind::NorthSouth;
    if (compare_classification(data, classification_data(blow_up(d, altered))).kind != Verdict::Kind::Distinct) ++distinct_fail;
  }
  const bool ok = angle_fail + sig_fail + equiv_fail + distinct_fail == 0;
  return {ok, "10 specs: angle misses " + std::to_string(angle_fail) + ", signature misses " + std::to_string(sig_fail) +
                  ", G_d copies not equivalent " + std::to_string(equiv_fail) + " (" + std::to_string(reflected) +
                  " reflected), altered copies not distinct " + std::to_string(distinct_fail)};
}

Outcome periodic_count() {
  bool ok = true;
  double worst = 0.0;
  for (int d : {2, 3}) {
    const auto map = make_linear(d);
    long dn = 1;
    for (int n = 1; n <= 6; ++n) {
      dn *= d;
      const auto pts = find_periodic_points(map, n);
      ok = ok && pts.size() == static_cast<std::size_t>(dn - 1);
      for (const auto& p : pts) {
        // z^{d^n} = z at angle x means (d^n - 1) x is an integer
        const double k = (dn - 1) * p.angle;
        worst = std::max(worst, std::abs(k - std::round(k)) / (dn - 1));
      }
    }
  }
  ok = ok && worst <= 1e-9;
  return {ok, std::string("counts d^n - 1 ") + (ok ? "ok" : "off") +
                  fmt(", max distance to exact orbit %.3g (limit 1e-9)", worst)};
}

Outcome band_semiconjugacy() {
  const auto map = make_skew_product(base_identity(), fiber_linear(2, [](double x) { return 0.1 * x; }));
  const Interval band{0.1, 0.9};
  const auto h = solve_band_semiconjugacy(map, band, 1e-10);
  double worst = 0.0;
  for (std::size_t i = 0; i <= h.nx(); ++i) {
    for (std::size_t j = 0; j <= h.ny(); ++j) {
      worst = std::max(worst, std::abs(h.at(i, j) - (h.y_node(j) + 0.1 * h.x_node(i))));
    }
  }
  int onto = 0, connectors = 0;
  for (int k = 0; k < 16; ++k) {
    const double x = band.a + (band.b - band.a) * (k + 0.5) / 16.0;
    onto += check_fiber_surjectivity(h, x) ? 1 : 0;
    connectors += check_fiber_connector(h, k / 16.0).ok ? 1 : 0;
  }
  const bool ok = worst <= 1e-6 && onto == 16 && connectors == 16;
  return {ok, fmt("max |H - (y + 0.1x)| = %.3g (limit 1e-6), onto fibers %g/16, connector levels %g/16", worst, onto,
                  connectors)};
}

Outcome repeller_recovery() {
  bool ok = true;
  std::string detail;
  for (int d : {2, 3}) {
    const auto map = product_model(d, base_affine(0.45, 0.275));
    const auto rep = repelling_connectors(map, ConnectorCurve::horizontal(0.5 / d), 10);
    const double lambda = rep.expansion;
    // the nested strips shrink onto the fixed circles of y -> d y: y = k/(d-1)
    double worst = 0.0;
    for (const auto& c : rep.curves) {
      double best = 1.0;
      for (int k = 0; k < d - 1; ++k) {
        double off = 0.0;
        for (double y : c.ys()) off = std::max(off, circle_distance(y, static_cast<double>(k) / (d - 1)));
        best = std::min(best, off);
      }
      worst = std::max(worst, best);
    }
    const double limit = 2.0 * std::pow(lambda, -10);
    ok = ok && rep.curves.size() == static_cast<std::size_t>(d - 1) && worst <= limit;
    detail += fmt("z^%g: %g curves, offset %.3g", d, static_cast<double>(rep.curves.size()), worst) +
              fmt(" (limit %.3g); ", limit);
  }
  return {ok, detail};
}

Outcome repeller_vs_operator() {
  bool ok = true;
  std::string detail;
  for (int d : {2, 3}) {
    const auto map = make_skew_product(base_affine(0.45, 0.275), fiber_linear(d, [](double x) { return 0.1 * x + 0.05 * x * x; }));
    const int depth = 10;
    const double tol = 1e-10;
    const auto rep = repelling_connectors(map, ConnectorCurve::horizontal(0.25 / d, 256), depth);
    const Interval band{0.3, 0.7};
    const Grid2D grid{64, 256};
    const auto coded = semiconjugacy_from_repellers(map, rep, depth, band, grid);
    const auto op = solve_band_semiconjugacy(map, band, tol, 0, grid);
    double best = 1.0;
    for (const auto& c : self_conjugacies(d)) {
      double worst = 0.0;
      for (std::size_t i = 0; i <= grid.nx; ++i) {
        for (std::size_t j = 0; j <= grid.ny; ++j) {
          worst = std::max(worst, circle_distance(coded.field.at(i, j), c.apply(op.at(i, j))));
        }
      }
      best = std::min(best, worst);
    }
    const double limit = std::pow(d, 1 - depth) + 10 * tol;
    ok = ok && best <= limit;
    detail += fmt("d=%g: min_c sup|H_coded - c H_op| = %.3g (limit %.3g); ", d, best, limit);
  }
  return {ok, detail};
}

Outcome obstruction_bound() {
  const auto map = pole_example(base_affine(0.45, 0.275));
  const auto rep = star_condition_scan(map, {0.1, 0.9}, LoopSpec{0.5, 0.0}, 6);
  long worst = 0;
  for (long w : rep.max_winding) worst = std::max(worst, w);
  return {rep.within_bound && rep.max_winding.size() == 6,
          fmt("n <= 6: max winding %g, M = %.6g, 2M+1 = %.6g", static_cast<double>(worst), rep.m, rep.bound) + ", " +
              std::to_string(rep.records.size()) + " lifts"};
}

Outcome counterexample_growth() {
  const auto rows = counterexample_growth_table(8);
  bool ok = rows.size() == 7;
  std::string bounds;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ok = ok && rows[i].n == static_cast<int>(i) + 2 && rows[i].lower_bound == rows[i].n - 1 && rows[i].verified;
    bounds += (i ? "," : "") + std::to_string(rows[i].lower_bound);
  }
  return {ok, "lower bounds for n=2..8: " + bounds + (ok ? ", all band invariants hold" : "")};
}

Outcome stability_construction() {
  const EpsilonSpec eps{0.1, 0.0};
  const auto rep = verify_perturbation(perturb_p2(eps), eps, 100000, 10000, 0.01);
  const int expected = static_cast<int>(std::ceil(std::log2(2 * std::numbers::pi / 0.01)));
  const bool ok = rep.distance_samples == 100000 && rep.sup_ratio < 1.0 && rep.r_samples == 10000 &&
                  rep.r_invariant == rep.r_samples && rep.injective_certificate && rep.sampled_collisions == 0 &&
                  rep.noninjective_iterate == expected;
  return {ok, fmt("sup|g - p2|/eps = %.4g, R-invariant %g/10000", rep.sup_ratio, static_cast<double>(rep.r_invariant)) +
                  (rep.injective_certificate ? ", injectivity certificate ok" : ", no certificate") +
                  fmt(", non-injective after n = %g (expected %g)", rep.noninjective_iterate, expected)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double time_limit;  // seconds; 0 = none
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "operator contraction", 5.0, operator_contraction},
      {2, "model fixed point", 0.0, model_fixed_point},
      {3, "shift law", 0.0, shift_law},
      {4, "affine oracle", 0.0, affine_oracle},
      {5, "G_d dihedral group", 0.0, self_conjugacy_group},
      {6, "classification round trip", 30.0, classification_round_trip},
      {7, "periodic count", 0.0, periodic_count},
      {8, "band semiconjugacy", 0.0, band_semiconjugacy},
      {9, "repeller recovery", 0.0, repeller_recovery},
      {10, "repeller-coded vs operator", 0.0, repeller_vs_operator},
      {11, "obstruction bound", 0.0, obstruction_bound},
      {12, "counterexample growth", 0.0, counterexample_growth},
      {13, "stability construction", 10.0, stability_construction},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.2fs", secs);
    if (c.time_limit > 0) {
      timing += fmt(" (limit %gs)", c.time_limit);
      if (secs >= c.time_limit) o.pass = false;
    }
    std::printf("[%s] %2d %s: %s [%s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
