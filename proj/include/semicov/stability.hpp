#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "semicov/annulus.hpp"

namespace semicov {

/// Radial tolerance eps(x) = scale * x^exponent on (0,1).
struct EpsilonSpec {
  double scale = 0.1;
  double exponent = 0.0;

  double operator()(double x) const;
  /// "0.1" or "0.1,2" (scale, exponent). Throws ParseError / BadParams.
  static EpsilonSpec parse(const std::string& text);
};

/// Odd increasing piecewise-linear map of the angle (radians): t -> rho' t / rho
/// on [0, rho], then linear up to (2 rho, 4 rho), then 2t.
double bump_phi(double rho, double rho_prime, double t);

/// rho on (0,1): on [1/4, 1/2] a ramp from c/2 to c with c = 0.45 min eps there;
/// below 1/4 by rho(y) = min(rho(sqrt y)/2, 0.45 eps(y)) one squaring domain at
/// a time; above 1/2 it is min(rho(1/2), 0.45 eps(x)).
class RadialRho {
 public:
  explicit RadialRho(EpsilonSpec eps);
  double operator()(double x) const;
  const EpsilonSpec& epsilon() const { return eps_; }
  std::vector<std::pair<double, double>> samples(std::size_t n) const;

 private:
  EpsilonSpec eps_;
  double c_ = 0.0;
};

RadialRho radial_rho(const EpsilonSpec& eps);

/// g(x e^{it}) = x^2 e^{i phi(t)} with phi = bump_phi(rho(x), min(rho(x^2), rho(x))),
/// as a skew product in turns; exactly 2y wherever |t| > 2 rho(x).
AnnulusMapLift perturb_p2(const EpsilonSpec& eps);

struct PerturbationReport {
  std::size_t distance_samples = 0;
  double sup_ratio = 0.0;  // sup |g(z) - p2(z)| / eps(z)
  std::size_t r_samples = 0;
  std::size_t r_invariant = 0;
  bool injective_certificate = false;
  double min_fiber_slope = 0.0;  // smallest PL slope of phi over the sampled x
  std::size_t sampled_collisions = 0;
  double width = 0.0;
  int noninjective_iterate = 0;  // first n with 2^n w > 2 pi
  int noninjective_formula = 0;  // ceil(log2(2 pi / w))
};

PerturbationReport verify_perturbation(const AnnulusMapLift& g, const EpsilonSpec& eps, std::size_t distance_samples = 100000,
                                       std::size_t r_samples = 10000, double width = 0.01,
                                       std::uint64_t seed = 20240601);

}  // namespace semicov
