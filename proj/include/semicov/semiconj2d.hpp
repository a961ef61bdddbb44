#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "semicov/annulus.hpp"
#include "semicov/classify1d.hpp"

namespace semicov {

/// H on band x [0,1] sampled on an (nx+1) x (ny+1) grid, bilinear in
/// between, extended by H(x, y + k) = H(x, y) + k o exactly. Samples may be
/// NaN where H is undefined.
class BandField2D {
 public:
  BandField2D(Interval band, std::size_t nx, std::size_t ny, std::vector<double> values, int orientation, int degree);

  static BandField2D linear(Interval band, std::size_t nx, std::size_t ny, int orientation, int degree);

  double operator()(double x, double y) const;
  double at(std::size_t i, std::size_t j) const { return values_[i * (ny_ + 1) + j]; }
  double x_node(std::size_t i) const;
  double y_node(std::size_t j) const { return static_cast<double>(j) / static_cast<double>(ny_); }

  const Interval& band() const { return band_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  int orientation() const { return orientation_; }
  int degree() const { return degree_; }
  std::span<const double> values() const { return values_; }

  double residual() const { return residual_; }
  double deviation_bound() const { return deviation_; }  // M = sup |H - o y|
  int iterations() const { return iterations_; }
  void set_diagnostics(double residual, int iterations);

 private:
  Interval band_;
  std::size_t nx_, ny_;
  std::vector<double> values_;
  int orientation_;
  int degree_;
  double residual_ = 0.0;
  double deviation_ = 0.0;
  int iterations_ = 0;
};

struct Grid2D {
  std::size_t nx = 64;
  std::size_t ny = 512;
};

/// Fixed point of T(H) = H o F / d on an invariant product band. Stops when
/// the sup-change is at most tol / |d|, so the node residual is at most tol.
BandField2D solve_band_semiconjugacy(const AnnulusMapLift& map, Interval band, double tol = 1e-10, int max_iter = 0,
                                     Grid2D grid = {}, int orientation = 1);

/// sup over nodes of |H(F(p)) - d H(p)|, skipping nodes whose image leaves the band.
double band_residual(const BandField2D& h, const AnnulusMapLift& map);

struct BoundedSolve {
  BandField2D field;
  std::vector<Interval> truncations;
  double interior_change = 0.0;  // between the last two truncations, on the first one
  bool stabilized = false;
};

/// Bounded-deviation fixed point on widening truncations of (0,1); where F
/// leaves the truncation, H(F) is closed by o y' + (mean deviation of H).
BoundedSolve solve_bounded_semiconjugacy(const AnnulusMapLift& map, Interval truncation = {0.1, 0.9},
                                         double tol = 1e-8, Grid2D grid = {}, int max_widenings = 10);

/// The values h(x_level, .) mod 1 leave no circular gap above max_gap.
bool check_fiber_surjectivity(const BandField2D& h, double x_level, double max_gap = 0.01);

struct ConnectorCheck {
  bool ok = true;
  bool domain_gap = false;  // some level had undefined samples
  std::optional<std::size_t> failing_level;
  explicit operator bool() const { return ok; }
};

/// Every grid x-level of the band contains a point where h is within tol of z
/// (exact along each level: the interpolant is continuous in y).
ConnectorCheck check_fiber_connector(const BandField2D& h, double z, double tol = 1e-9);

struct FixedPointEquality {
  bool equal = false;
  std::optional<long> lift_witness;
  bool inconclusive = false;
};

/// p, q are (x, angle) fixed points of f. Normalizes the lift to fix p~ and
/// looks for l with F(q~ - (0,l)) = q~ - (0,l).
FixedPointEquality fixed_point_h_equality(const AnnulusMapLift& map, const BandField2D& h,
                                          std::pair<double, double> p, std::pair<double, double> q, double tol = 1e-8);

}  // namespace semicov
