#include "semicov/classify1d.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <sstream>

#include "semicov/error.hpp"

namespace semicov {

std::vector<Interval> plateau_set(const SemiconjugacyField1D& h, double plateau_tol) {
  const std::size_t n = h.grid_size();
  const double tol = plateau_tol > 0.0 ? plateau_tol : 2.0 / static_cast<double>(n);
  const double o = h.orientation();
  auto s = h.samples();
  // o H is nondecreasing; index j in [0, 2N] walks one extra period
  auto val = [&](std::size_t j) { return j <= n ? o * s[j] : o * s[j - n] + 1.0; };

  std::vector<std::pair<std::size_t, std::size_t>> windows;
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    j = std::max(j, i);
    while (j + 1 <= i + n && val(j + 1) - val(i) < tol) ++j;
    if (j - i >= 2) windows.emplace_back(i, j);
  }

  std::vector<std::pair<std::size_t, std::size_t>> merged;
  for (const auto& w : windows) {
    if (!merged.empty() && w.first < merged.back().second) {
      merged.back().second = std::max(merged.back().second, w.second);
    } else {
      merged.push_back(w);
    }
  }
  if (merged.size() > 1 && merged.back().second > n && merged.back().second - n > merged.front().first) {
    merged.back().second = std::max(merged.back().second, merged.front().second + n);
    merged.erase(merged.begin());
  }

  std::vector<Interval> out;
  const double dn = static_cast<double>(n);
  for (const auto& [a, b] : merged) {
    if (b - a >= n) continue;  // H constant everywhere: no arc structure
    out.push_back({static_cast<double>(a) / dn, static_cast<double>(b) / dn});
  }
  std::sort(out.begin(), out.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
  return out;
}

std::string to_string(const PointKind& k) {
  switch (k.type) {
    case PointKind::Type::Periodic: return "periodic(" + std::to_string(k.period) + ")";
    case PointKind::Type::Preperiodic: return "preperiodic";
    case PointKind::Type::Wandering: return "wandering";
  }
  return "?";
}

PointKind classify_circle_point(double z, int d, int max_period, int max_depth, double tol) {
  auto step = [d](double x) { return wrap01(d * x); };
  auto period_of = [&](double x) {
    double y = x;
    for (int n = 1; n <= max_period; ++n) {
      y = step(y);
      if (circle_distance(y, x) <= tol) return n;
    }
    return 0;
  };
  double x = wrap01(z);
  if (int n = period_of(x)) return {PointKind::Type::Periodic, n, 0};
  for (int k = 1; k <= max_depth; ++k) {
    x = step(x);
    if (int n = period_of(x)) return {PointKind::Type::Preperiodic, n, k};
  }
  return {};
}

IntervalSignature IntervalSignature::reflected() const {
  IntervalSignature r = *this;
  std::reverse(r.sign_pattern.begin(), r.sign_pattern.end());
  for (int& v : r.sign_pattern) v = -v;
  std::swap(r.left_attracting, r.right_attracting);
  return r;
}

std::string to_string(const IntervalSignature& s) {
  if (!s.resolved) return "unresolved";
  if (s.identity) return "identity";
  std::ostringstream os;
  os << (s.orientation > 0 ? "+" : "-") << " count " << s.fixed_point_count << " (";
  for (std::size_t i = 0; i < s.sign_pattern.size(); ++i) os << (i ? "," : "") << (s.sign_pattern[i] > 0 ? "+" : "-");
  os << ")";
  return os.str();
}

IntervalSignature interval_signature(const LiftedCircleMap& map, Interval iv, int period, double tol) {
  if (period < 1) throw Error(ErrorKind::BadParams, "period must be >= 1");
  if (!(iv.b > iv.a)) throw Error(ErrorKind::BadParams, "empty interval");
  const int orientation = (period % 2 == 1 && map.degree() < 0) ? -1 : 1;
  const double k = std::round(map.iterate(iv.mid(), period) - iv.mid());
  auto g = [&](double x) { return map.iterate(x, period) - k - x; };

  const double ia = map.iterate(iv.a, period) - k;
  const double ib = map.iterate(iv.b, period) - k;
  if (std::min(ia, ib) < iv.a - tol || std::max(ia, ib) > iv.b + tol) {
    throw Error(ErrorKind::NotInvariant, "f^" + std::to_string(period) + " does not map [" + std::to_string(iv.a) +
                                             ", " + std::to_string(iv.b) + "] into itself");
  }

  const double cell = 1.0 / static_cast<double>(map.grid_size());
  const auto m = static_cast<std::size_t>(
      std::clamp(8.0 * iv.length() / cell, 512.0, 65536.0));
  std::vector<double> xs(m + 1), gs(m + 1);
  bool identity = true;
  for (std::size_t i = 0; i <= m; ++i) {
    xs[i] = iv.a + iv.length() * static_cast<double>(i) / static_cast<double>(m);
    gs[i] = g(xs[i]);
    identity = identity && std::abs(gs[i]) <= tol;
  }
  IntervalSignature sig;
  sig.orientation = orientation;
  if (identity) {
    sig.identity = true;
    return sig;
  }

  auto code = [&](double v) { return std::abs(v) <= tol ? 0 : (v > 0 ? 1 : -1); };
  const double delta = 2.0 * cell;
  std::vector<int> codes;
  std::vector<double> where;
  codes.push_back(code(g(iv.a - delta)));
  where.push_back(iv.a - delta);
  for (std::size_t i = 0; i <= m; ++i) {
    codes.push_back(code(gs[i]));
    where.push_back(xs[i]);
  }
  codes.push_back(code(g(iv.b + delta)));
  where.push_back(iv.b + delta);

  std::vector<int> pieces;
  std::vector<double> roots;
  int cur = 0;
  std::size_t zero_start = 0;
  bool in_zero = false;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    const int c = codes[i];
    if (c == 0) {
      if (!in_zero) {
        in_zero = true;
        zero_start = i;
        if (cur != 0) pieces.push_back(cur);
        cur = 0;
      }
      continue;
    }
    if (in_zero) {
      in_zero = false;
      if (i - zero_start > 3) sig.resolved = false;  // a whole arc of fixed points
      roots.push_back(0.5 * (where[zero_start] + where[i - 1]));
    } else if (cur != 0 && c != cur) {
      pieces.push_back(cur);
      roots.push_back(0.5 * (where[i - 1] + where[i]));
    }
    cur = c;
  }
  if (in_zero) roots.push_back(0.5 * (where[zero_start] + where.back()));
  if (cur != 0) pieces.push_back(cur);
  for (std::size_t i = 1; i < roots.size(); ++i) {
    if (roots[i] - roots[i - 1] < cell) sig.resolved = false;
  }

  sig.fixed_point_count = static_cast<int>(roots.size());
  sig.sign_pattern = pieces;
  if (sig.sign_pattern.size() != roots.size() + 1) sig.resolved = false;
  const bool a_fixed = codes[1] == 0;
  const bool b_fixed = codes[codes.size() - 2] == 0;
  if (pieces.size() >= 3) {
    sig.left_attracting = a_fixed && pieces[1] < 0;
    sig.right_attracting = b_fixed && pieces[pieces.size() - 2] > 0;
  }
  return sig;
}

Interval refine_periodic_interval(const LiftedCircleMap& map, Interval iv, int period) {
  const bool preserving = map.degree() > 0 || period % 2 == 0;
  if (!preserving || !map.is_covering()) return iv;
  const double k = std::round(map.iterate(iv.mid(), period) - iv.mid());
  auto back = [&](double y) {
    y += k;
    for (int i = 0; i < period; ++i) y = map.inverse(y);
    return y;
  };
  const double cell = 1.0 / static_cast<double>(map.grid_size());
  // the approach from outside is monotone and geometric; once rounding pushes
  // x past the end point the inverse branch repels it into the interior, so
  // stop at the first step that reverses or grows
  auto settle = [&](double x) {
    double prev = 0.0;
    for (int it = 0; it < 400; ++it) {
      const double nx = back(x);
      const double step = nx - x;
      if (std::abs(step) <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) return nx;
      if (it > 0 && ((step > 0) != (prev > 0) || std::abs(step) > std::abs(prev))) return x;
      prev = step;
      x = nx;
    }
    return x;
  };
  const double a = settle(iv.a - cell);
  const double b = settle(iv.b + cell);
  if (!(a < b) || std::abs(a - iv.a) > 4 * cell || std::abs(b - iv.b) > 4 * cell) return iv;
  return {a, b};
}

ClassificationData classification_data(const LiftedCircleMap& map, const ClassificationParams& p) {
  if (!map.is_covering()) throw Error(ErrorKind::NotACovering, "classification needs a covering");
  const auto h = solve_semiconjugacy(map, 1, p.tol);
  ClassificationData out;
  out.degree = map.degree();
  out.grid = map.grid_size();
  out.tol = p.tol;
  out.max_period = p.max_period;
  for (const auto& iv : plateau_set(h, p.plateau_tol)) {
    PlateauRecord r;
    r.image_angle = wrap01(h(iv.mid()));
    r.kind = classify_circle_point(r.image_angle, map.degree(), p.max_period, p.max_depth, p.angle_tol);
    r.interval = iv;
    if (r.kind.type == PointKind::Type::Periodic) {
      r.interval = refine_periodic_interval(map, iv, r.kind.period);
      try {
        r.signature = interval_signature(map, r.interval, r.kind.period, p.signature_tol);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotInvariant) throw;
        r.signature.resolved = false;
      }
    } else {
      r.signature = IntervalSignature::identity_class();
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

std::string to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Equivalent: return "equivalent";
    case Verdict::Kind::Distinct: return "distinct";
    case Verdict::Kind::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// records narrower than this many cells may appear on one side only
constexpr double kResolutionCells = 4.0;

bool below_resolution(const PlateauRecord& r, std::size_t grid) {
  return r.interval.length() * static_cast<double>(grid) < kResolutionCells;
}

}  // namespace

Verdict compare_classification(const ClassificationData& a, const ClassificationData& b, double tol) {
  if (a.degree != b.degree) {
    return {Verdict::Kind::Distinct, std::nullopt,
            "degrees differ: " + std::to_string(a.degree) + " vs " + std::to_string(b.degree)};
  }
  std::string mismatch;
  std::optional<Verdict> inconclusive;
  for (const auto& c : self_conjugacies(a.degree)) {
    std::vector<int> partner(a.records.size(), -1);
    std::vector<bool> used(b.records.size(), false);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      const double target = c.apply(a.records[i].image_angle);
      double best = tol;
      for (std::size_t j = 0; j < b.records.size(); ++j) {
        const double dist = circle_distance(target, b.records[j].image_angle);
        if (!used[j] && dist <= best) {
          best = dist;
          partner[i] = static_cast<int>(j);
        }
      }
      if (partner[i] >= 0) used[static_cast<std::size_t>(partner[i])] = true;
    }

    bool missing_significant = false;
    bool missing_wandering_only = true;
    auto note_missing = [&](const PlateauRecord& r, std::size_t grid) {
      if (below_resolution(r, grid)) return;
      missing_significant = true;
      if (r.kind.type != PointKind::Type::Wandering) missing_wandering_only = false;
    };
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      if (partner[i] < 0) note_missing(a.records[i], a.grid);
    }
    for (std::size_t j = 0; j < b.records.size(); ++j) {
      if (!used[j]) note_missing(b.records[j], b.grid);
    }
    if (missing_significant && !missing_wandering_only) {
      if (mismatch.empty()) mismatch = "record angle sets differ";
      continue;
    }

    bool unresolved = false;
    std::string local;
    for (std::size_t i = 0; i < a.records.size() && local.empty(); ++i) {
      if (partner[i] < 0) continue;
      const auto& ra = a.records[i];
      const auto& rb = b.records[static_cast<std::size_t>(partner[i])];
      if (ra.kind.type != rb.kind.type || ra.kind.period != rb.kind.period) {
        local = "kind mismatch at angle " + std::to_string(rb.image_angle);
        break;
      }
      if (!ra.signature.resolved || !rb.signature.resolved) {
        unresolved = true;
        continue;
      }
      const auto sa = c.reflect ? ra.signature.reflected() : ra.signature;
      if (!(sa == rb.signature)) local = "signature mismatch at angle " + std::to_string(rb.image_angle);
    }
    if (!local.empty()) {
      if (mismatch.empty() || mismatch == "record angle sets differ") mismatch = local;
      continue;
    }
    if (!unresolved && !missing_significant) return {Verdict::Kind::Equivalent, c, ""};
    if (!inconclusive) {
      inconclusive = Verdict{Verdict::Kind::Inconclusive, c,
                             unresolved ? "unresolved interval signature"
                                        : "wandering records match only partially at this resolution"};
    }
  }
  if (inconclusive) return *inconclusive;
  return {Verdict::Kind::Distinct, std::nullopt, mismatch.empty() ? "no self-conjugacy matches" : mismatch};
}

std::string to_string(InsertKind k) {
  switch (k) {
    case InsertKind::Identity: return "identity";
    case InsertKind::NorthSouth: return "north_south";
    case InsertKind::SouthNorth: return "south_north";
    case InsertKind::Shift: return "shift";
  }
  return "?";
}

InsertKind parse_insert_kind(const std::string& s) {
  if (s == "identity") return InsertKind::Identity;
  if (s == "north_south") return InsertKind::NorthSouth;
  if (s == "south_north") return InsertKind::SouthNorth;
  if (s == "shift") return InsertKind::Shift;
  throw Error(ErrorKind::ValidationError, "unknown insert kind '" + s + "'");
}

double insert_profile(InsertKind k, double s) {
  switch (k) {
    case InsertKind::Identity: return s;
    case InsertKind::NorthSouth: return s + 0.5 * s * (1.0 - s) * (1.0 - 2.0 * s);
    case InsertKind::SouthNorth: return s - 0.5 * s * (1.0 - s) * (1.0 - 2.0 * s);
    case InsertKind::Shift: return s + 0.5 * s * (1.0 - s);
  }
  return s;
}

namespace {

constexpr double kAngleMatch = 1e-9;

struct Member {
  double angle;
  double length;
  int insertion;
  PointKind kind;
  bool carrier;
  InsertKind profile;
  double left = 0.0;  // position on the blown-up circle before snapping
};

class Members {
 public:
  const Member* find(double angle) const {
    angle = wrap01(angle);
    auto near = [&](auto it) -> const Member* {
      if (it == m_.end()) return nullptr;
      return circle_distance(it->first, angle) <= kAngleMatch ? &it->second : nullptr;
    };
    auto it = m_.lower_bound(angle - kAngleMatch);
    if (auto p = near(it)) return p;
    if (!m_.empty() && angle > 1.0 - kAngleMatch) {
      if (auto p = near(m_.begin())) return p;
    }
    if (!m_.empty() && angle < kAngleMatch) {
      if (auto p = near(std::prev(m_.end()))) return p;
    }
    return nullptr;
  }

  // false if the angle is already present for the same insertion
  bool add(Member m) {
    m.angle = wrap01(m.angle);
    if (const Member* old = find(m.angle)) {
      if (old->insertion == m.insertion) return false;
      throw Error(ErrorKind::Clash, "grand orbits of insertions " + std::to_string(old->insertion) + " and " +
                                        std::to_string(m.insertion) + " meet at angle " + std::to_string(m.angle));
    }
    m_.emplace(m.angle, m);
    return true;
  }

  std::vector<Member> sorted() const {
    std::vector<Member> v;
    for (const auto& [k, m] : m_) v.push_back(m);
    return v;
  }

 private:
  std::map<double, Member> m_;
};

// x -> d^k x mod 1 for x = p/q held exactly
double rational_orbit(std::uint64_t p, std::uint64_t q, int d, int k) {
  unsigned __int128 v = p % q;
  for (int i = 0; i < k; ++i) v = (v * static_cast<unsigned>(d)) % q;
  return static_cast<double>(static_cast<std::uint64_t>(v)) / static_cast<double>(q);
}

// Forward part of the grand orbit: base, its images, and the cycle if any.
std::vector<Member> forward_chain(int d, const Insertion& ins, int idx, const BlowUpOptions& opt) {
  const double base = wrap01(ins.base_angle);
  const PointKind kind = classify_circle_point(base, d, 16, 16, kAngleMatch);
  std::vector<Member> out;
  if (kind.type == PointKind::Type::Wandering) {
    double x = base;
    double len = ins.length;
    const double floor_len = 0.5 / static_cast<double>(opt.grid);
    for (int k = 0;; ++k, len *= 0.5, x = wrap01(d * x)) {
      if (k > opt.max_depth && len < floor_len) break;
      out.push_back({x, len, idx, {}, false, ins.kind});
    }
    return out;
  }
  const int m = kind.preperiod;
  const int n = kind.period;
  const double bits = (m + n) * std::log2(static_cast<double>(d));
  if (bits > 62) throw Error(ErrorKind::BadParams, "orbit of the base angle too long to represent exactly");
  std::uint64_t q = 1;
  for (int i = 0; i < n; ++i) q *= static_cast<std::uint64_t>(d);
  q -= 1;
  for (int i = 0; i < m; ++i) q *= static_cast<std::uint64_t>(d);
  const auto p = static_cast<std::uint64_t>(std::llround(base * static_cast<double>(q))) % q;
  for (int k = 0; k < m + n; ++k) {
    const bool on_cycle = k >= m;
    PointKind kk = on_cycle ? PointKind{PointKind::Type::Periodic, n, 0}
                            : PointKind{PointKind::Type::Preperiodic, n, m - k};
    out.push_back({rational_orbit(p, q, d, k), ins.length, idx, kk, k == m, ins.kind});
  }
  return out;
}

// Periodic piecewise-linear homeomorphism through (x_j, y_j), extended by
// eta(x + 1) = eta(x) + 1.
class CircleHomeo {
 public:
  CircleHomeo(std::vector<double> xs, std::vector<double> ys) {
    const std::size_t m = xs.size();
    xs_.push_back(xs[m - 1] - 1.0);
    ys_.push_back(ys[m - 1] - 1.0);
    xs_.insert(xs_.end(), xs.begin(), xs.end());
    ys_.insert(ys_.end(), ys.begin(), ys.end());
    xs_.push_back(xs[0] + 1.0);
    ys_.push_back(ys[0] + 1.0);
  }

  double operator()(double u) const { return eval(xs_, ys_, u); }
  double inverse(double v) const { return eval(ys_, xs_, v); }

 private:
  static double eval(const std::vector<double>& from, const std::vector<double>& to, double u) {
    const double k = std::floor(u - from.front());
    const double r = u - k;  // in [from.front(), from.front() + 1)
    auto it = std::upper_bound(from.begin(), from.end(), r);
    std::size_t i = static_cast<std::size_t>(std::distance(from.begin(), it));
    i = std::clamp<std::size_t>(i, 1, from.size() - 1) - 1;
    const double w = (r - from[i]) / (from[i + 1] - from[i]);
    return to[i] + w * (to[i + 1] - to[i]) + k;
  }

  std::vector<double> xs_, ys_;
};

}  // namespace

BlowUp blow_up_detailed(int d, std::span<const Insertion> insertions, const BlowUpOptions& opt) {
  if (d < 2) throw Error(ErrorKind::BadParams, "blow-up is implemented for degree >= 2");
  if (opt.grid < kMinSamples) throw Error(ErrorKind::ValidationError, "grid too coarse");
  const double n_cells = static_cast<double>(opt.grid);
  double requested = 0.0;
  for (const auto& ins : insertions) {
    if (!(ins.length > 0.0)) throw Error(ErrorKind::BadParams, "inserted length must be positive");
    requested += ins.length;
  }
  if (requested >= 1.0) throw Error(ErrorKind::Overfull, "inserted lengths sum to " + std::to_string(requested));

  Members members;
  std::deque<std::pair<Member, int>> queue;
  for (std::size_t i = 0; i < insertions.size(); ++i) {
    for (const auto& m : forward_chain(d, insertions[i], static_cast<int>(i), opt)) {
      if (members.add(m)) queue.emplace_back(m, 0);
    }
  }
  const double min_len = opt.min_cells / n_cells;
  while (!queue.empty()) {
    auto [parent, depth] = queue.front();
    queue.pop_front();
    if (depth >= opt.max_depth) continue;
    const double len = parent.length / (2.0 * d);
    if (len < min_len) continue;
    PointKind kind = parent.kind;
    if (kind.type != PointKind::Type::Wandering) kind = {PointKind::Type::Preperiodic, kind.period, kind.preperiod + 1};
    for (int i = 0; i < d; ++i) {
      const double angle = (parent.angle + i) / d;
      if (const Member* old = members.find(angle); old && old->insertion == parent.insertion) continue;
      Member child{angle, len, parent.insertion, kind, false, parent.profile};
      if (members.add(child)) queue.emplace_back(child, depth + 1);
    }
  }

  std::vector<Member> s = members.sorted();
  double total = 0.0;
  for (const auto& m : s) total += m.length;
  if (total >= 1.0) throw Error(ErrorKind::Overfull, "grand orbits need total length " + std::to_string(total));
  const double free = 1.0 - total;

  std::vector<double> prefix(s.size() + 1, 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    prefix[i + 1] = prefix[i] + s[i].length;
    s[i].left = free * s[i].angle + prefix[i];
  }
  std::vector<double> angles(s.size());
  std::vector<double> lefts(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    angles[i] = s[i].angle;
    lefts[i] = s[i].left;
  }

  // left end of the slot of angle t (t lifted)
  auto psi = [&](double t) {
    const double k = std::floor(t);
    const double r = t - k;
    const auto idx = static_cast<std::size_t>(
        std::distance(angles.begin(), std::lower_bound(angles.begin(), angles.end(), r - kAngleMatch)));
    return free * r + prefix[idx] + k;
  };
  auto find_index = [&](double angle) -> std::optional<std::size_t> {
    const Member* m = members.find(angle);
    if (!m) return std::nullopt;
    const double key = m->angle;
    auto it = std::lower_bound(angles.begin(), angles.end(), key);
    return static_cast<std::size_t>(std::distance(angles.begin(), it));
  };

  auto ideal = [&](double u) {
    const double k = std::floor(u);
    const double r = u - k;
    auto it = std::upper_bound(lefts.begin(), lefts.end(), r + 1e-13);
    if (it != lefts.begin()) {
      const auto i = static_cast<std::size_t>(std::distance(lefts.begin(), it)) - 1;
      const Member& p = s[i];
      if (r <= p.left + p.length + 1e-13) {
        const double t = std::clamp((r - p.left) / p.length, 0.0, 1.0);
        const double q = d * p.angle;
        if (auto j = find_index(wrap01(q))) {
          const Member& target = s[*j];
          const double lift = std::round(q - target.angle);
          const double phi = p.carrier ? insert_profile(p.profile, t) : t;
          return target.left + target.length * phi + lift + k * d;
        }
        return psi(q) + k * d;
      }
      const double theta = (r - prefix[i + 1]) / free;
      return psi(d * theta) + k * d;
    }
    return psi(d * r / free) + k * d;
  };

  // translate so the first insertion sits mid-circle, and move the ends of
  // intervals wide enough to matter onto grid nodes
  double tau = 0.0;
  if (!insertions.empty()) {
    if (auto j = find_index(wrap01(insertions[0].base_angle))) tau = 0.5 - (s[*j].left + 0.5 * s[*j].length);
  }
  auto snap = [&](double x) { return std::round(x * n_cells) / n_cells; };
  std::vector<double> kx, ky;
  std::vector<bool> resolved(s.size(), false);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].length * n_cells < 4.0) continue;
    resolved[i] = true;
    kx.push_back(s[i].left);
    ky.push_back(snap(s[i].left + tau));
    kx.push_back(s[i].left + s[i].length);
    ky.push_back(snap(s[i].left + s[i].length + tau));
  }
  if (kx.empty()) {
    kx.push_back(0.0);
    ky.push_back(tau);
  }
  for (std::size_t i = 0; i < kx.size(); ++i) {
    const double nx = i + 1 < kx.size() ? kx[i + 1] : kx[0] + 1.0;
    const double ny = i + 1 < ky.size() ? ky[i + 1] : ky[0] + 1.0;
    if (!(nx > kx[i]) || !(ny > ky[i])) {
      throw Error(ErrorKind::Clash, "inserted intervals closer than the grid resolution");
    }
  }
  const CircleHomeo eta(kx, ky);

  std::vector<double> samples(opt.grid + 1);
  for (std::size_t i = 0; i <= opt.grid; ++i) {
    const double x = static_cast<double>(i) / n_cells;
    samples[i] = eta(ideal(eta.inverse(x)));
  }
  BlowUp out{LiftedCircleMap(std::move(samples), {"blow_up", {{"degree", d},
                                                               {"insertions", static_cast<double>(insertions.size())}}}),
             {}};
  for (std::size_t i = 0; i < s.size(); ++i) {
    double a = eta(s[i].left);
    double b = eta(s[i].left + s[i].length);
    const double shift = std::floor(a);
    out.intervals.push_back({s[i].angle, {a - shift, b - shift}, s[i].insertion, s[i].kind, resolved[i], s[i].carrier});
  }
  return out;
}

LiftedCircleMap blow_up(int d, std::span<const Insertion> insertions, const BlowUpOptions& opt) {
  return blow_up_detailed(d, insertions, opt).map;
}

}  // namespace semicov
