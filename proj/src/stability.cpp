#include "semicov/stability.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "semicov/error.hpp"

namespace semicov {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double parse_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::ParseError, "not a number: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

double EpsilonSpec::operator()(double x) const { return exponent == 0.0 ? scale : scale * std::pow(x, exponent); }

EpsilonSpec EpsilonSpec::parse(const std::string& text) {
  EpsilonSpec e;
  const auto comma = text.find(',');
  e.scale = parse_number(std::string_view(text).substr(0, comma));
  if (comma != std::string::npos) e.exponent = parse_number(std::string_view(text).substr(comma + 1));
  // 2 rho < eps must keep the bump inside half a turn
  if (!(e.scale > 0.0) || !(e.scale < std::numbers::pi / 2) || e.exponent < 0.0) {
    throw Error(ErrorKind::BadParams, "epsilon needs 0 < scale < pi/2 and exponent >= 0");
  }
  return e;
}

double bump_phi(double rho, double rho_prime, double t) {
  if (!(rho > 0.0) || !(rho_prime > 0.0) || rho_prime > rho) {
    throw Error(ErrorKind::BadParams, "bump needs 0 < rho' <= rho");
  }
  const double a = std::abs(t);
  double v;
  if (a <= rho) {
    v = rho_prime * a / rho;
  } else if (a <= 2.0 * rho) {
    v = rho_prime + (4.0 * rho - rho_prime) * (a - rho) / rho;
  } else {
    return 2.0 * t;
  }
  return t < 0.0 ? -v : v;
}

RadialRho::RadialRho(EpsilonSpec eps) : eps_(eps) {
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 1000; ++i) lo = std::min(lo, eps_(0.25 + 0.25 * i / 1000.0));
  c_ = 0.45 * lo;
}

double RadialRho::operator()(double x) const {
  if (x > 0.5) return std::min(c_, 0.45 * eps_(x));
  if (x >= 0.25) return c_ * 2.0 * x;
  return std::min(0.5 * (*this)(std::sqrt(x)), 0.45 * eps_(x));
}

std::vector<std::pair<double, double>> RadialRho::samples(std::size_t n) const {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    out.emplace_back(x, (*this)(x));
  }
  return out;
}

RadialRho radial_rho(const EpsilonSpec& eps) { return RadialRho(eps); }

AnnulusMapLift perturb_p2(const EpsilonSpec& eps) {
  const RadialRho rho(eps);
  auto fiber = [rho](double x, double y) {
    const double r = rho(x);
    const double t = y <= 0.5 ? kTwoPi * y : kTwoPi * (y - 1.0);
    if (std::abs(t) > 2.0 * r) return 2.0 * y;
    const double v = bump_phi(r, std::min(rho(x * x), r), t) / kTwoPi;
    return y <= 0.5 ? v : v + 2.0;
  };
  return make_skew_product([](double x) { return x * x; }, fiber, "perturbed p2");
}

PerturbationReport verify_perturbation(const AnnulusMapLift& g, const EpsilonSpec& eps, std::size_t distance_samples,
                                       std::size_t r_samples, double width, std::uint64_t seed) {
  const RadialRho rho(eps);
  PerturbationReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // (i) half the samples inside |t| <= 2.5 rho(x), half around the whole circle
  rep.distance_samples = distance_samples;
  for (std::size_t i = 0; i < distance_samples; ++i) {
    const double x = 1e-6 + (1.0 - 2e-6) * unit(rng);
    const double r = rho(x);
    const double t = i % 2 == 0 ? (2.0 * unit(rng) - 1.0) * 2.5 * r : (2.0 * unit(rng) - 1.0) * std::numbers::pi;
    const auto [gx, gy] = g(x, t / kTwoPi);
    const double chord =
        std::hypot(gx * std::cos(kTwoPi * gy) - x * x * std::cos(2.0 * t), gx * std::sin(kTwoPi * gy) - x * x * std::sin(2.0 * t));
    rep.sup_ratio = std::max(rep.sup_ratio, chord / eps(x));
  }

  // (ii) forward invariance of R = {x < 1/2, |t| < rho(x)}
  std::vector<std::pair<std::pair<double, double>, std::pair<double, double>>> images;
  rep.r_samples = r_samples;
  for (std::size_t i = 0; i < r_samples; ++i) {
    const double x = 0.5 * unit(rng);
    if (x <= 0.0) continue;
    const double t = (2.0 * unit(rng) - 1.0) * rho(x);
    const auto [gx, gy] = g(x, t / kTwoPi);
    const double gt = kTwoPi * (gy - std::round(gy));
    if (gx < 0.5 && std::abs(gt) < rho(gx)) ++rep.r_invariant;
    images.push_back({{gx, gt}, {x, t}});
  }
  std::sort(images.begin(), images.end());
  for (std::size_t i = 1; i < images.size(); ++i) {
    const auto& a = images[i - 1];
    const auto& b = images[i];
    if (a.second != b.second && std::abs(a.first.first - b.first.first) < 1e-15 &&
        std::abs(a.first.second - b.first.second) < 1e-15) {
      ++rep.sampled_collisions;
    }
  }

  // (iii) phi has slopes rho'/rho and (4 rho - rho')/rho, both positive when
  // 0 < rho' <= rho; x -> x^2 is injective on (0, 1/2); and |phi| < rho(x^2)
  // < pi keeps R's image inside one sheet
  rep.injective_certificate = true;
  rep.min_fiber_slope = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < 4096; ++i) {
    const double x = 0.5 * static_cast<double>(i) / 4096.0;
    const double r = rho(x), rp = std::min(rho(x * x), r);
    const double slope = std::min(rp / r, (4.0 * r - rp) / r);
    rep.min_fiber_slope = std::min(rep.min_fiber_slope, slope);
    rep.injective_certificate = rep.injective_certificate && slope > 0.0 && rp < std::numbers::pi &&
                                x * x > std::pow(0.5 * static_cast<double>(i - 1) / 4096.0, 2);
  }

  // (iv) an arc of width w doubles under p2 until it wraps
  rep.width = width;
  double w = width;
  while (w <= kTwoPi) {
    w *= 2.0;
    ++rep.noninjective_iterate;
  }
  rep.noninjective_formula = static_cast<int>(std::ceil(std::log2(kTwoPi / width)));
  return rep;
}

}  // namespace semicov
