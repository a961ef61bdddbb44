#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semicov/circle_map.hpp"
#include "semicov/classify1d.hpp"

namespace semicov {

using BaseFn = std::function<double(double)>;
// g(x, y) on the fundamental domain y in [0, 1]
using FiberFn = std::function<double(double, double)>;

/// Lift F(x, y) = (phi(x), g_x(y)) of a skew-product covering of the open
/// annulus (0,1) x S^1; g_x(y + k) = g_x(y) + k d holds exactly because only
/// the fundamental domain of the fiber is ever evaluated.
class AnnulusMapLift {
 public:
  /// Validates on a sample grid: integer degree constant across fibers,
  /// strict monotonicity of every sampled fiber, base mapping into (0,1).
  AnnulusMapLift(BaseFn base, FiberFn fiber, std::string name = {}, std::optional<Interval> band = std::nullopt);

  /// Skips validation; for deliberately broken maps in tests.
  static AnnulusMapLift unchecked(BaseFn base, FiberFn fiber, int degree, std::string name = {});

  std::pair<double, double> operator()(double x, double y) const;
  double base(double x) const { return base_(x); }
  double fiber(double x, double y) const;
  /// The y with g_x(y) = v (fibers are monotone, so this is unique).
  double fiber_inverse(double x, double v) const;
  /// Solves phi(x) = target by bisection on (0,1); BaseNotInvertible if the
  /// target is not bracketed.
  double base_inverse(double target) const;

  int degree() const { return degree_; }
  const std::string& name() const { return name_; }
  const std::optional<Interval>& band() const { return band_; }

 private:
  AnnulusMapLift() = default;

  BaseFn base_;
  FiberFn fiber_;
  int degree_ = 0;
  std::string name_;
  std::optional<Interval> band_;
};

// base families
BaseFn base_identity();
BaseFn base_affine(double slope, double offset);  // slope x + offset
BaseFn base_power(double p);                       // x^p

/// g_x(y) = d y + tau(x).
FiberFn fiber_linear(int d, std::function<double(double)> tau = {});
/// g_x(y) = F(y) + tau(x) for a lifted circle map F.
FiberFn fiber_circle_map(const LiftedCircleMap& map, std::function<double(double)> tau = {});

AnnulusMapLift make_skew_product(BaseFn base, FiberFn fiber, std::string name = {});

/// (x, z^d).
AnnulusMapLift product_model(int d, BaseFn base = base_identity());
/// (phi(x), z^2 exp(2 pi i / (1 - x))).
AnnulusMapLift pole_example(BaseFn base);

std::pair<double, double> evaluate_annulus(const AnnulusMapLift& map, double x, double y);

struct DisplacementReport {
  double sup = 0.0;                  // sup |y1 - d y0| over the band
  bool diverges = false;             // heuristic, see margin_sups
  std::vector<double> margin_sups;  // sups over shrinking margins at an open end
};

/// Sampled sup of |g_x(y) - d y| over band x [0,1). A band touching 0 or 1 is
/// scanned with margins 1e-1 .. 1e-6, and the flag is raised when the sup
/// grows at every step and by at least a factor 10 overall.
DisplacementReport displacement_bound(const AnnulusMapLift& map, Interval band, int grid = 256);

/// The |d| points (x, y), y in [0,1), mapped to (x', theta') mod 1.
std::vector<std::pair<double, double>> fiber_preimages(const AnnulusMapLift& map, double x_target, double theta,
                                                       double tol = 1e-12);

struct AnnulusRotation {
  std::vector<double> estimates;  // y_n / d^n, n = 1..n_max
  bool converged = false;
  double gap = 0.0;  // max |e_n - e_nmax| over the second half of the run
};

AnnulusRotation estimate_annulus_rotation(const AnnulusMapLift& map, double x0, double y0, int n_max,
                                          double gap_tol = 1e-6);

}  // namespace semicov
