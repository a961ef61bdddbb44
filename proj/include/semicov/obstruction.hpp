#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semicov/annulus.hpp"

namespace semicov {

/// The closed curve t -> (x0, theta0 + t), one positive turn of the fiber over x0.
struct LoopSpec {
  double x0 = 0.5;
  double theta0 = 0.0;
};

struct WindingRecord {
  int n = 0;
  long j = 0;
  std::pair<double, double> start;
  double y1 = 0.0, y2 = 0.0;  // lifted heights of the endpoints of beta
  long winding = 0;           // |floor(y2) - floor(y1)|, crossings of y = 0 mod 1
  double push_error = 0.0;    // sup |F^n(beta(s)) - (j alpha)(s)| in height
};

/// Lifts j alpha under f^n starting at `start` (a point over phi^{-n}(x0)
/// whose F^n height is theta0 mod 1) by stepwise inverse-branch continuation.
WindingRecord lift_loop_winding(const AnnulusMapLift& map, const LoopSpec& loop, int n, long j,
                                std::pair<double, double> start, Interval k, double tol = 1e-9);

struct WindingReport {
  Interval k;
  LoopSpec loop;
  std::vector<WindingRecord> records;
  std::vector<long> max_winding;  // per n = 1..n_max
  double m = 0.0;                 // sup_K |H - y|
  double bound = 0.0;             // 2M + 1
  bool within_bound = true;
};

/// Condition (*) evidence: for n <= n_max, j in {1, ceil(d^{n-1}/2), d^{n-1}}
/// and every f^n-preimage start of the loop's base point. M is measured by the
/// band operator on K unless given.
WindingReport star_condition_scan(const AnnulusMapLift& map, Interval k, const LoopSpec& loop, int n_max,
                                  std::optional<double> m = std::nullopt);

/// Lifted endpoint bookkeeping of the counterexample built with n bands of
/// z -> z^2 below A_0; heights are in turns.
struct BandModel {
  int n = 0;
  std::vector<double> radii;  // a_k for k = 0..n+1
  std::pair<double, double> alpha_start, alpha_end;
  std::pair<double, double> beta_start, beta_end;                // f^{n-1}(alpha)
  double beta_prime_height = 0.5;                                // beta' sits at z = -1
  double t = 0.0;                                                // alpha' starts at height t
  std::pair<double, double> alpha_prime_start, alpha_prime_end;
  double x_height = 0.0;  // X' on alpha_0
  double y_height = 0.0;  // Y' on alpha'_0
  long lower_bound = 0;
  std::vector<std::string> failed;  // violated invariants, empty when verified
};

BandModel build_band_model(int n);

struct GrowthRow {
  int n = 0;
  long lower_bound = 0;
  bool verified = false;
};

std::vector<GrowthRow> counterexample_growth_table(int n_max);

}  // namespace semicov
