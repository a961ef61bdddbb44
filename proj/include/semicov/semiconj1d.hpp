#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "semicov/circle_map.hpp"

namespace semicov {

/// Lift H of a semiconjugacy h (h f = m_d h) sampled on the uniform grid of
/// [0,1]; H(x + 1) = H(x) + orientation holds exactly.
class SemiconjugacyField1D {
 public:
  SemiconjugacyField1D(std::vector<double> samples, int orientation, int degree);

  /// The starting point o * x of the fixed-point iteration.
  static SemiconjugacyField1D linear(std::size_t n, int orientation, int degree);

  double operator()(double x) const;

  int orientation() const { return orientation_; }
  int degree() const { return degree_; }
  std::size_t grid_size() const { return samples_.size() - 1; }
  double node(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(grid_size()); }
  std::span<const double> samples() const { return samples_; }

  // sup |H(F x) - d H(x)| over the grid nodes (what the contraction controls)
  double residual() const { return residual_; }
  // the same quantity over 10 N points, including interpolation error
  double interp_residual() const { return interp_residual_; }
  int iterations() const { return iterations_; }

  void set_diagnostics(double residual, double interp_residual, int iterations);

  /// sup over nodes of |H1 - H2|.
  friend double sup_distance(const SemiconjugacyField1D& a, const SemiconjugacyField1D& b);

 private:
  std::vector<double> samples_;
  int orientation_ = 1;
  int degree_ = 0;
  double residual_ = 0.0;
  double interp_residual_ = 0.0;
  int iterations_ = 0;
};

/// One application of T(H)(x) = H(F(x)) / d on the grid nodes.
SemiconjugacyField1D contraction_step(const SemiconjugacyField1D& h, const LiftedCircleMap& map);

/// Iterates T from o * x until the sup-change is at most tol (1 - 1/|d|),
/// which bounds the distance to the fixed point by tol.
SemiconjugacyField1D solve_semiconjugacy(const LiftedCircleMap& map, int orientation = 1, double tol = 1e-10,
                                         int max_iter = 0);

/// Measured sup |H(F x) - d H(x)| on the nodes and on 10 N interior points.
std::pair<double, double> measure_residual(const SemiconjugacyField1D& h, const LiftedCircleMap& map);

struct RotationEstimate {
  double value;   // H_F^+(x) from the operator fixed point
  double direct;  // F^n(x) / d^n
  double gap;     // |value - direct|
  int iterates;
};

/// Rotation number rho_F(x) = lim F^n(x)/d^n, read off a solved H^+ field and
/// cross-checked against the direct quotient.
RotationEstimate rotation_number(const LiftedCircleMap& map, const SemiconjugacyField1D& h_plus, double x);
RotationEstimate rotation_number(const LiftedCircleMap& map, double x);

/// F^n(x) / d^n with n chosen so that |d|^-n is below 1e-15.
double rotation_quotient(const LiftedCircleMap& map, double x, int* iterates = nullptr);

/// Element of G_d: z -> exp(2 pi i j/|d-1|) * (reflect ? conj(z) : z).
struct SelfConjugacy {
  int rotation_index = 0;
  bool reflect = false;
  int order = 1;  // |d - 1|

  /// Action on angles in turns.
  double apply(double angle) const;
  /// Same action on a lift value (keeps the integer part meaningful).
  double apply_lift(double value) const;
  SelfConjugacy compose(const SelfConjugacy& inner) const;  // this o inner
  SelfConjugacy inverse() const;
  friend bool operator==(const SelfConjugacy&, const SelfConjugacy&) = default;
};

std::vector<SelfConjugacy> self_conjugacies(int d);

/// The unique c in G_d with h1 = c h2 up to 10 tol (exhaustive search).
SelfConjugacy relate_semiconjugacies(const SemiconjugacyField1D& h1, const SemiconjugacyField1D& h2, double tol);

}  // namespace semicov
