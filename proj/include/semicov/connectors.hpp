#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "semicov/annulus.hpp"
#include "semicov/semiconj2d.hpp"

namespace semicov {

inline constexpr double kBoundaryMargin = 1e-3;

/// A connector given as a lifted graph y = c(x) over [x_min, x_max], linear
/// between (possibly non-uniform) samples.
class ConnectorCurve {
 public:
  ConnectorCurve(std::vector<double> xs, std::vector<double> ys, double margin = kBoundaryMargin);

  /// y = height over n + 1 uniform samples of [margin, 1 - margin].
  static ConnectorCurve horizontal(double height, std::size_t n = 256, double margin = kBoundaryMargin);

  /// Height at x; outside the sampled range the end value is held.
  double operator()(double x) const;

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  double x_min() const { return xs_.front(); }
  double x_max() const { return xs_.back(); }
  double margin() const { return margin_; }
  bool reaches_low() const { return x_min() <= margin_ * (1 + 1e-9); }
  bool reaches_high() const { return x_max() >= 1.0 - margin_ * (1 + 1e-9); }
  /// Largest height jump between neighbouring samples.
  double max_jump() const;

 private:
  std::vector<double> xs_, ys_;
  double margin_;
};

/// The |d| components of f^{-1}(C), each a graph over the x with phi(x) in
/// C's range: w_m(x) = g_x^{-1}(c(phi(x)) + m).
std::vector<ConnectorCurve> preimage_connectors(const AnnulusMapLift& map, const ConnectorCurve& c);

/// f(C) and C do not meet (circle distance above tol wherever both are defined).
bool is_free(const AnnulusMapLift& map, const ConnectorCurve& c, double tol = 1e-9);

struct InvariantConnector {
  ConnectorCurve curve;
  double residual = 0.0;        // sup circle distance of f(C) to C at the samples
  double dense_residual = 0.0;  // the same between samples
  bool boundary_accumulating = false;
};

/// Concatenates f^n(gamma), n = 0..n_fwd, and the backward lifts of gamma
/// (continued from the shared endpoint p) for n = 1..n_back, where gamma is
/// the straight lifted segment from p to F(p).
InvariantConnector invariant_connector_from_arc(const AnnulusMapLift& map, std::pair<double, double> p, int n_back,
                                                int n_fwd, std::size_t samples = 64,
                                                double margin = kBoundaryMargin);

struct Repellers {
  std::vector<ConnectorCurve> curves;
  std::vector<int> gap_index;           // gap of f^{-1}(C) each curve lives in
  std::vector<long> lift_shift;         // t with F(R~) = R~ + (0, t)
  std::vector<std::vector<double>> gaps;  // successive-depth sup distances
  double expansion = 0.0;               // sampled min fiber slope
};

/// Nested inverse-branch iteration in each gap of f^{-1}(C) that does not
/// contain C. Requires a free C and fiber slope > 1.
Repellers repelling_connectors(const AnnulusMapLift& map, const ConnectorCurve& c, int depth);

struct RepellerField {
  BandField2D field;
  double residual = 0.0;  // sup |H(F p) - d H(p)| over the nodes, both coded pointwise
  double half_width = 0.0;
  bool low_resolution = false;
};

/// h coded by the repellers: R_j gets t_j/(d-1), and H(p) is read off the
/// pair of lifted repellers enclosing F^depth(p), divided by d^depth.
RepellerField semiconjugacy_from_repellers(const AnnulusMapLift& map, const Repellers& repellers, int depth,
                                           Interval band, Grid2D grid = {32, 256});

}  // namespace semicov
