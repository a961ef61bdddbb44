#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "semicov/circle_map.hpp"
#include "semicov/classify1d.hpp"
#include "semicov/error.hpp"
#include "semicov/semiconj1d.hpp"

using namespace semicov;

namespace {

using Type = PointKind::Type;

// f^n - id on a north-south interval: repelling ends, attracting middle;
// just outside the interval the expanding part pushes away from it
const std::vector<int> kNorthSouth{-1, 1, -1, 1};
const std::vector<int> kSouthNorth{-1, -1, 1, 1};
const std::vector<int> kShift{-1, 1, 1};

IntervalSignature expected(InsertKind k) {
  IntervalSignature s;
  switch (k) {
    case InsertKind::Identity: s.identity = true; break;
    case InsertKind::NorthSouth: s.fixed_point_count = 3; s.sign_pattern = kNorthSouth; break;
    case InsertKind::SouthNorth:
      s.fixed_point_count = 3;
      s.sign_pattern = kSouthNorth;
      s.left_attracting = s.right_attracting = true;
      break;
    case InsertKind::Shift:
      s.fixed_point_count = 2;
      s.sign_pattern = kShift;
      s.right_attracting = true;
      break;
  }
  return s;
}

const PlateauRecord* record_near(const ClassificationData& d, double angle, double tol = 1e-3) {
  for (const auto& r : d.records) {
    if (circle_distance(r.image_angle, angle) <= tol) return &r;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("classify_circle_point examples") {
  CHECK(classify_circle_point(0.0, 2) == PointKind{Type::Periodic, 1, 0});
  CHECK(classify_circle_point(1.0 / 3.0, 2) == PointKind{Type::Periodic, 2, 0});
  auto k = classify_circle_point(0.1, 2);
  CHECK(k.type == Type::Preperiodic);
  CHECK(k.period == 4);
  CHECK(k.preperiod == 1);
  CHECK(classify_circle_point(0.1 * std::sqrt(2.0), 2).type == Type::Wandering);
}

TEST_CASE("plateau_set") {
  CHECK(plateau_set(solve_semiconjugacy(make_linear(2))).empty());

  std::vector<Insertion> ins{{0.0, 0.1, InsertKind::Identity}};
  auto bu = blow_up_detailed(2, ins);
  auto h = solve_semiconjugacy(bu.map);
  auto ps = plateau_set(h);
  bool found = false;
  for (const auto& iv : ps) {
    found = found || (std::abs(iv.a - 0.45) < 1e-3 && std::abs(iv.b - 0.55) < 1e-3);
  }
  CHECK(found);
  // every detected plateau is one of the inserted intervals, and every
  // inserted interval of at least 4 cells is detected
  const double cell = 1.0 / bu.map.grid_size();
  for (const auto& iv : ps) {
    bool known = false;
    for (const auto& r : bu.intervals) {
      known = known || (std::abs(r.interval.a - iv.a) <= 2 * cell + 1e-12 && std::abs(r.interval.b - iv.b) <= 2 * cell + 1e-12);
    }
    CHECK(known);
  }
  for (const auto& r : bu.intervals) {
    if (r.interval.length() < 4 * cell) continue;
    bool seen = false;
    for (const auto& iv : ps) seen = seen || (iv.a <= r.interval.a + 2 * cell && iv.b >= r.interval.b - 2 * cell);
    CHECK(seen);
  }
}

TEST_CASE("blow_up basics") {
  auto plain = blow_up(2, {});
  for (std::size_t i = 0; i <= plain.grid_size(); ++i) CHECK(std::abs(plain.samples()[i] - 2.0 * plain.node(i)) < 1e-15);

  std::vector<Insertion> full{{0.0, 0.6, InsertKind::Identity}, {1.0 / 3.0, 0.5, InsertKind::Identity}};
  CHECK_THROWS_AS(blow_up(2, full), Error);
  try {
    blow_up(2, full);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Overfull);
  }
  // 1/2 is a preimage of 0 under doubling
  std::vector<Insertion> clash{{0.0, 0.05, InsertKind::Identity}, {0.5, 0.05, InsertKind::Identity}};
  try {
    blow_up(2, clash);
    FAIL("expected Clash");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Clash);
  }

  std::vector<Insertion> w{{0.1 * std::sqrt(2.0), 0.1, InsertKind::Identity}};
  auto wand = blow_up_detailed(2, w);
  CHECK(wand.map.is_covering());
  CHECK(wand.map.degree() == 2);
}

TEST_CASE("interval_signature on inserted homeomorphisms") {
  for (auto kind : {InsertKind::Identity, InsertKind::NorthSouth, InsertKind::SouthNorth, InsertKind::Shift}) {
    std::vector<Insertion> ins{{0.0, 0.1, kind}};
    auto bu = blow_up_detailed(2, ins);
    REQUIRE(bu.map.is_covering());
    const InsertedInterval* base = nullptr;
    for (const auto& r : bu.intervals) {
      if (r.carries_kind) base = &r;
    }
    REQUIRE(base != nullptr);
    auto sig = interval_signature(bu.map, base->interval, 1);
    CHECK_MESSAGE(sig == expected(kind), to_string(kind), " -> ", to_string(sig));
  }

  // a wandering plateau is not mapped into itself
  std::vector<Insertion> w{{0.1 * std::sqrt(2.0), 0.1, InsertKind::Identity}};
  auto bu = blow_up_detailed(2, w);
  try {
    interval_signature(bu.map, bu.intervals.front().interval, 1);
    FAIL("expected NotInvariant");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotInvariant);
  }
}

TEST_CASE("find_periodic_points on a north-south blow-up") {
  std::vector<Insertion> ins{{0.0, 0.1, InsertKind::NorthSouth}};
  auto bu = blow_up_detailed(2, ins);
  // oracle: sign changes of F(x) - x - k on a 1e5 grid
  std::vector<double> changes;
  auto g = [&](double x) { return bu.map(x) - x; };
  const int m = 100000;
  for (int i = 0; i < m; ++i) {
    const double x0 = double(i) / m, x1 = double(i + 1) / m;
    if (std::floor(g(x0)) != std::floor(g(x1)) || g(x0) == std::floor(g(x0))) changes.push_back(x0);
  }
  auto pts = find_periodic_points(bu.map, 1, 1e-12);
  CHECK(pts.size() == 3);
  for (const auto& p : pts) {
    bool near = false;
    for (double c : changes) near = near || std::abs(c - p.angle) <= 2e-5;
    CHECK(near);
  }
}

TEST_CASE("classification_data examples") {
  CHECK(classification_data(make_linear(2)).records.empty());

  std::vector<Insertion> ns{{0.0, 0.1, InsertKind::NorthSouth}};
  auto d = classification_data(blow_up(2, ns));
  CHECK(d.degree == 2);
  int periodic = 0;
  for (const auto& r : d.records) {
    if (r.kind.type != Type::Periodic) {
      CHECK(r.signature == IntervalSignature::identity_class());
      continue;
    }
    ++periodic;
    CHECK(circle_distance(r.image_angle, 0.0) < 1e-6);
    CHECK(r.kind.period == 1);
    CHECK(r.signature == expected(InsertKind::NorthSouth));
  }
  CHECK(periodic == 1);

  std::vector<Insertion> pre{{0.1, 0.1, InsertKind::Identity}};
  auto dp = classification_data(blow_up(2, pre));
  auto r = record_near(dp, 0.1);
  REQUIRE(r != nullptr);
  CHECK(r->kind.type == Type::Preperiodic);
}

TEST_CASE("compare_classification examples") {
  std::vector<Insertion> ns{{0.0, 0.1, InsertKind::NorthSouth}};
  auto d = classification_data(blow_up(2, ns));
  auto v = compare_classification(d, d);
  CHECK(v.kind == Verdict::Kind::Equivalent);
  CHECK(*v.relator == SelfConjugacy{0, false, 1});

  std::vector<Insertion> at0{{0.0, 0.08, InsertKind::Shift}};
  std::vector<Insertion> at_half{{0.5, 0.08, InsertKind::Shift}};
  auto v3 = compare_classification(classification_data(blow_up(3, at0)), classification_data(blow_up(3, at_half)));
  CHECK(v3.kind == Verdict::Kind::Equivalent);
  REQUIRE(v3.relator);
  CHECK(v3.relator->rotation_index == 1);
  CHECK_FALSE(v3.relator->reflect);

  std::vector<Insertion> id{{0.0, 0.1, InsertKind::Identity}};
  auto vd = compare_classification(d, classification_data(blow_up(2, id)));
  CHECK(vd.kind == Verdict::Kind::Distinct);
  CHECK(vd.reason.find("signature") != std::string::npos);

  CHECK(compare_classification(d, classification_data(make_linear(3))).kind == Verdict::Kind::Distinct);
}

namespace {

struct RandomSpec {
  int d;
  std::vector<Insertion> ins;
  std::vector<int> periods;
};

// one or two insertions on periodic orbits of period <= 3
RandomSpec random_spec(std::mt19937_64& rng, bool symmetric_kinds) {
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_real_distribution<double> len(0.03, 0.07);
  for (;;) {
    RandomSpec s;
    s.d = 2 + coin(rng);
    const int count = 1 + coin(rng);
    for (int i = 0; i < count; ++i) {
      const int n = std::uniform_int_distribution<int>(1, 3)(rng);
      const int q = static_cast<int>(std::pow(s.d, n)) - 1;
      const int k = std::uniform_int_distribution<int>(0, q - 1)(rng);
      const int kind = std::uniform_int_distribution<int>(0, symmetric_kinds ? 2 : 3)(rng);
      s.ins.push_back({static_cast<double>(k) / q, len(rng), static_cast<InsertKind>(kind)});
    }
    try {
      blow_up(s.d, s.ins);
    } catch (const Error&) {
      continue;
    }
    for (const auto& in : s.ins) s.periods.push_back(classify_circle_point(in.base_angle, s.d).period);
    return s;
  }
}

}  // namespace

TEST_CASE("round trip: classification of a blow-up recovers the spec") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 6; ++trial) {
    auto spec = random_spec(rng, false);
    auto bu = blow_up_detailed(spec.d, spec.ins);
    REQUIRE(bu.map.is_covering());
    auto data = classification_data(bu.map);
    for (std::size_t i = 0; i < spec.ins.size(); ++i) {
      auto r = record_near(data, spec.ins[i].base_angle);
      REQUIRE(r != nullptr);
      CHECK(r->kind == PointKind{Type::Periodic, spec.periods[i], 0});
      CHECK_MESSAGE(r->signature == expected(spec.ins[i].kind), to_string(r->signature));
    }
    for (const auto& r : data.records) {
      bool inserted = false;
      for (const auto& iv : bu.intervals) inserted = inserted || circle_distance(iv.angle, r.image_angle) <= 1e-3;
      CHECK(inserted);
    }
  }
}

TEST_CASE("plateau set is completely invariant at resolution") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 4; ++trial) {
    auto spec = random_spec(rng, false);
    auto map = blow_up(spec.d, spec.ins);
    auto ps = plateau_set(solve_semiconjugacy(map));
    const double cell = 1.0 / map.grid_size();
    auto covered = [&](double a, double b) {
      const double shift = std::floor(a);
      a -= shift;
      b -= shift;
      if (b - a < 4 * cell) return true;  // below resolution
      for (const auto& p : ps) {
        for (double k : {-1.0, 0.0, 1.0}) {
          if (p.a + k <= a + 2 * cell && p.b + k >= b - 2 * cell) return true;
        }
      }
      return false;
    };
    for (const auto& p : ps) {
      // detection may overshoot a plateau by two cells on each side
      const double a = p.a + 2 * cell;
      const double b = p.b - 2 * cell;
      CHECK(covered(map(a), map(b)));
      for (int k = 0; k < spec.d; ++k) CHECK(covered(map.inverse(a + k), map.inverse(b + k)));
    }
  }
}

TEST_CASE("conjugate blow-ups compare equivalent, altered ones distinct") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    auto spec = random_spec(rng, true);
    auto group = self_conjugacies(spec.d);
    const auto c = group[std::uniform_int_distribution<std::size_t>(0, group.size() - 1)(rng)];
    auto moved = spec.ins;
    for (auto& in : moved) in.base_angle = c.apply(in.base_angle);
    auto a = classification_data(blow_up(spec.d, spec.ins));
    auto b = classification_data(blow_up(spec.d, moved));
    auto v = compare_classification(a, b);
    CHECK_MESSAGE(v.kind == Verdict::Kind::Equivalent, v.reason);

    auto altered = spec.ins;
    altered[0].kind = altered[0].kind == InsertKind::NorthSouth ? InsertKind::Identity : InsertKind::NorthSouth;
    CHECK(compare_classification(a, classification_data(blow_up(spec.d, altered))).kind == Verdict::Kind::Distinct);
  }
}

TEST_CASE("orbits of a map with a periodic plateau are never 0.05-dense") {
  // a trapped orbit stays on one side of the attracting midpoint, so a
  // quarter-turn plateau leaves a gap of at least 0.125 > 2 epsilon
  std::vector<Insertion> ins{{0.0, 0.25, InsertKind::NorthSouth}};
  auto map = blow_up(2, ins);
  auto data = classification_data(map);
  REQUIRE(record_near(data, 0.0) != nullptr);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int bins = 2000;
  int dense = 0;
  for (int p = 0; p < 1000; ++p) {
    std::vector<char> hit(bins, 0);
    double x = u(rng);
    for (int it = 0; it < 10000; ++it) {
      x = wrap01(map(x));
      hit[std::min(bins - 1, static_cast<int>(x * bins))] = 1;
    }
    // epsilon-dense iff every circular gap between visits is at most 2 epsilon
    int longest = 0, run = 0;
    for (int i = 0; i < 2 * bins; ++i) {
      run = hit[i % bins] ? 0 : run + 1;
      longest = std::max(longest, run);
    }
    if (static_cast<double>(longest) / bins <= 0.1) ++dense;
  }
  CHECK(dense == 0);
}

TEST_CASE("periodic points are dense off the plateaus") {
  std::vector<Insertion> ins{{1.0 / 3.0, 0.06, InsertKind::Shift}, {0.1, 0.05, InsertKind::Identity}};
  auto map = blow_up(2, ins);
  auto ps = plateau_set(solve_semiconjugacy(map));
  REQUIRE(!ps.empty());
  std::vector<double> per;
  for (int n = 1; n <= 8; ++n) {
    for (const auto& p : find_periodic_points(map, n)) per.push_back(p.angle);
  }
  std::sort(per.begin(), per.end());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double lo = ps[i].b;
    const double hi = i + 1 < ps.size() ? ps[i + 1].a : ps[0].a + 1.0;
    if (hi - lo < 0.05) continue;
    double last = lo;
    for (double shift : {0.0, 1.0}) {
      for (double q : per) {
        if (q + shift > lo && q + shift < hi) {
          CHECK(q + shift - last < 0.05);
          last = q + shift;
        }
      }
    }
    CHECK(hi - last < 0.05);
  }
}

TEST_CASE("refinement of a plateau straddling x = 1 keeps attracting ends") {
  // 1/2 is fixed by z^3 and its inserted interval wraps past the lift origin
  std::vector<Insertion> ins{{0.0, 0.037, InsertKind::SouthNorth}, {0.5, 0.0333, InsertKind::SouthNorth}};
  auto data = classification_data(blow_up(3, ins));
  for (const auto& in : ins) {
    auto r = record_near(data, in.base_angle, 1e-6);
    REQUIRE(r != nullptr);
    CHECK_MESSAGE(r->signature == expected(InsertKind::SouthNorth), to_string(r->signature));
  }
}
