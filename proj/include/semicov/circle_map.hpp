#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace semicov {

inline constexpr double kDegreeTol = 1e-9;
inline constexpr std::size_t kMinSamples = 16;
inline constexpr std::size_t kDefaultGrid = 4096;

/// Reduces an angle (in turns) to [0, 1).
double wrap01(double x);

/// Distance on R/Z, in [0, 1/2].
double circle_distance(double a, double b);

// Optional closed-form provenance of a sampled map; purely descriptive.
struct FamilyTag {
  std::string name;
  std::vector<std::pair<std::string, double>> params;
};

/// A degree-d circle endomorphism stored as its lift F on the fundamental
/// domain [0,1]. Only F(i/N), i = 0..N, are stored; F is piecewise linear in
/// between and extended by F(x + k) = F(x) + k d, so equivariance is exact.
class LiftedCircleMap {
 public:
  /// Validates the endpoint identity and degree; the last sample is snapped to
  /// samples[0] + d so that equivariance holds bit-for-bit.
  explicit LiftedCircleMap(std::vector<double> samples, FamilyTag tag = {});

  double operator()(double x) const;
  double iterate(double x, int n) const;
  /// Exact inverse of the piecewise-linear lift; requires a covering.
  double inverse(double y) const;

  int degree() const { return degree_; }
  bool is_covering() const { return covering_; }
  std::size_t grid_size() const { return samples_.size() - 1; }
  double node(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(grid_size()); }
  std::span<const double> samples() const { return samples_; }
  const FamilyTag& tag() const { return tag_; }

  /// The lift F + c (c an integer gives another lift of the same circle map).
  LiftedCircleMap shifted(double c) const;

 private:
  std::vector<double> samples_;
  int degree_ = 0;
  bool covering_ = false;
  FamilyTag tag_;
};

LiftedCircleMap make_lift(std::span<const double> samples);
LiftedCircleMap make_lift(const std::function<double(double)>& lift, std::size_t n = kDefaultGrid,
                          FamilyTag tag = {});

/// F(x) = d x + c.
LiftedCircleMap make_linear(int d, double c = 0.0, std::size_t n = kDefaultGrid);
/// F(x) = d x + amplitude sin(2 pi x).
LiftedCircleMap make_sine(int d, double amplitude, std::size_t n = kDefaultGrid);

double evaluate_lift(const LiftedCircleMap& map, double x);

struct PeriodicPoint {
  double angle;  // in [0, 1)
  int period;    // minimal period
};

/// All x in [0,1) with F^n(x) - x in Z, located by bisection on each integer
/// level of x -> F^n(x) - x. Requires a covering.
std::vector<PeriodicPoint> find_periodic_points(const LiftedCircleMap& map, int n, double tol = 1e-12);

}  // namespace semicov
