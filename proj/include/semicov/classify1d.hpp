#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semicov/circle_map.hpp"
#include "semicov/semiconj1d.hpp"

namespace semicov {

struct Interval {
  double a = 0.0;
  double b = 0.0;  // b may exceed 1 for an arc through 0
  double length() const { return b - a; }
  double mid() const { return 0.5 * (a + b); }
};

/// Maximal arcs of at least two grid cells on which H varies by less than
/// plateau_tol (default 2/N), sorted by left endpoint.
std::vector<Interval> plateau_set(const SemiconjugacyField1D& h, double plateau_tol = 0.0);

struct PointKind {
  enum class Type { Periodic, Preperiodic, Wandering };
  Type type = Type::Wandering;
  int period = 0;     // of the cycle reached (0 for wandering)
  int preperiod = 0;  // forward steps until the cycle

  bool operator==(const PointKind&) const = default;
};

std::string to_string(const PointKind& k);

PointKind classify_circle_point(double z, int d, int max_period = 8, int max_depth = 16, double tol = 1e-9);

/// Computable stand-in for the conjugacy class of f^n on a periodic interval.
struct IntervalSignature {
  int orientation = 1;
  bool identity = false;  // |f^n - id| <= tol on the whole interval
  bool resolved = true;
  int fixed_point_count = 0;
  // signs of f^n - id on the pieces cut out by the fixed points, starting just
  // outside the left endpoint and ending just outside the right one
  std::vector<int> sign_pattern;
  bool left_attracting = false;
  bool right_attracting = false;

  static IntervalSignature identity_class() { return {1, true, true, 0, {}, false, false}; }
  /// The signature seen through an orientation-reversing conjugacy.
  IntervalSignature reflected() const;

  bool operator==(const IntervalSignature&) const = default;
};

std::string to_string(const IntervalSignature& s);

IntervalSignature interval_signature(const LiftedCircleMap& map, Interval iv, int period, double tol = 1e-9);

/// Snaps the ends of a detected plateau of period n to the fixed points of
/// F^n - K by backward iteration from just outside (orientation-preserving
/// returns only; otherwise the interval is returned unchanged).
Interval refine_periodic_interval(const LiftedCircleMap& map, Interval iv, int period);

struct PlateauRecord {
  double image_angle = 0.0;
  PointKind kind;
  IntervalSignature signature;
  Interval interval;
};

struct ClassificationParams {
  double tol = 1e-10;          // semiconjugacy solve
  double plateau_tol = 0.0;    // 0 -> 2/N
  int max_period = 8;
  int max_depth = 16;
  double angle_tol = 1e-6;     // periodicity test on image angles
  double signature_tol = 1e-9;
};

struct ClassificationData {
  int degree = 0;
  std::vector<PlateauRecord> records;
  std::size_t grid = 0;
  double tol = 0.0;
  int max_period = 0;
};

ClassificationData classification_data(const LiftedCircleMap& map, const ClassificationParams& params = {});

struct Verdict {
  enum class Kind { Equivalent, Distinct, Inconclusive };
  Kind kind = Kind::Inconclusive;
  std::optional<SelfConjugacy> relator;
  std::string reason;
};

std::string to_string(Verdict::Kind k);

Verdict compare_classification(const ClassificationData& a, const ClassificationData& b, double tol = 1e-3);

enum class InsertKind { Identity, NorthSouth, SouthNorth, Shift };

std::string to_string(InsertKind k);
InsertKind parse_insert_kind(const std::string& s);

/// The homeomorphism of [0,1] realized on an inserted periodic interval.
double insert_profile(InsertKind k, double s);

struct Insertion {
  double base_angle = 0.0;
  double length = 0.1;
  InsertKind kind = InsertKind::Identity;
};

struct BlowUpOptions {
  std::size_t grid = kDefaultGrid;
  int max_depth = 12;       // preimage levels kept
  double min_cells = 0.05;  // drop preimage intervals shorter than this many cells
};

struct InsertedInterval {
  double angle = 0.0;
  Interval interval;  // position on the grid circle
  int insertion = 0;
  PointKind kind;
  bool resolved = false;      // endpoints sit on grid nodes
  bool carries_kind = false;  // the insert profile acts here
};

struct BlowUp {
  LiftedCircleMap map;
  std::vector<InsertedInterval> intervals;  // sorted by angle
};

/// Opens an interval in the grand orbit of each base angle of m_d (d > 1).
BlowUp blow_up_detailed(int d, std::span<const Insertion> insertions, const BlowUpOptions& opt = {});
LiftedCircleMap blow_up(int d, std::span<const Insertion> insertions, const BlowUpOptions& opt = {});

}  // namespace semicov
