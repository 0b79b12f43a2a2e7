/*
 * Copyright 2026 The uwauth Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "uwauth/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "quadrature.hpp"
#include "uwauth/error.hpp"

namespace uwauth {

namespace {

using std::numbers::pi;
using Complex = std::complex<double>;

// Terms whose scale is below this fraction of the largest scale are treated
// as the constant offset^2.
constexpr double kFoldRatio = 1e-10;
// Bound on the noncentral growth factor exp(G) along the rotated ray.
constexpr double kMaxRayGrowth = 2.0;
constexpr double kIntegralTolerance = 1e-7 * pi;
constexpr double kPanelTolerance = kIntegralTolerance / 256.0;
constexpr double kContractTolerance = 1e-6;
constexpr int kMaxPanelsPerSegment = 20000;
constexpr int kMaxSegments = 160;

// The distribution rescaled so the largest weight is one, with
// near-degenerate terms folded into a shift.
struct Normalized {
  std::vector<double> weight;          // w_i = (a_i / a_max)^2
  std::vector<double> noncentrality;   // lambda_i = (delta_i / a_i)^2
  double shift = 0.0;                  // sum of folded offset^2, original units
  double unit = 1.0;                   // a_max^2
  double mean = 0.0;
  double sd = 0.0;
};

Normalized normalize(const std::vector<QuadTerm>& terms) {
  Normalized n;
  double a_max = 0.0;
  for (const auto& t : terms) a_max = std::max(a_max, t.scale);
  n.unit = a_max * a_max;
  double var = 0.0;
  for (const auto& t : terms) {
    if (t.scale < kFoldRatio * a_max) {
      n.shift += t.offset * t.offset;
      continue;
    }
    const double r = t.scale / a_max;
    const double w = r * r;
    const double lambda = (t.offset / t.scale) * (t.offset / t.scale);
    n.weight.push_back(w);
    n.noncentrality.push_back(lambda);
    n.mean += w * (1.0 + lambda);
    var += 2.0 * w * w * (1.0 + 2.0 * lambda);
  }
  n.sd = std::sqrt(var);
  return n;
}

// Worst-case log growth of the noncentral factor on the ray U - i s.
double ray_growth(const Normalized& n, double cut) {
  double g = 0.0;
  for (std::size_t i = 0; i < n.weight.size(); ++i) {
    g += 0.5 * n.noncentrality[i] * std::max(0.0, 1.0 / (2.0 * n.weight[i] * cut) - 1.0);
  }
  return g;
}

class ImhofInversion {
 public:
  ImhofInversion(const Normalized& n, double x) : n_(n), x_(x) {}

  double evaluate() const {
    const double cut = choose_cut();
    double real_part = 0.0;
    double error = 0.0;
    int segments = 0;

    // Real axis, on geometrically growing panels.
    double lo = 0.0;
    double hi = std::min(cut, 1.0 / (n_.mean + x_ + n_.sd));
    bool tail_negligible = false;
    auto f = [this](double u) { return real_integrand(u); };
    while (true) {
      const auto r = detail::integrate_adaptive(f, lo, hi, kPanelTolerance, kMaxPanelsPerSegment);
      real_part += r.value;
      error += r.error;
      const double tail = log_tail_bound(hi);
      if (tail < std::log(kPanelTolerance)) {
        error += std::exp(tail);
        tail_negligible = true;
        break;
      }
      if (hi >= cut) break;
      lo = hi;
      hi = std::min(cut, 2.0 * hi);
    }

    // Beyond the cut: the ray U - i s, where exp(-i z x / 2) decays.
    double ray_part = 0.0;
    if (!tail_negligible) {
      auto g = [this, cut](double s) { return ray_integrand(cut, s); };
      const double log_scale = ray_log_scale(cut);
      double s_lo = 0.0;
      double s_hi = std::min(cut, 2.0 / x_);
      while (true) {
        const auto r = detail::integrate_adaptive(g, s_lo, s_hi, kPanelTolerance,
                                                  kMaxPanelsPerSegment);
        ray_part += r.value;
        error += r.error;
        const double tail =
            log_scale + std::log(2.0 / (x_ * std::max(s_hi, cut))) - 0.5 * s_hi * x_;
        if (tail < std::log(kPanelTolerance)) {
          error += std::exp(tail);
          break;
        }
        if (++segments > kMaxSegments) {
          error += std::exp(tail);
          break;
        }
        s_lo = s_hi;
        s_hi *= 2.0;
      }
    }

    const double achieved = error / pi;
    if (!(achieved <= kContractTolerance)) {
      throw NumericalAccuracyError("quadratic form CDF did not converge", achieved);
    }
    const double p = 0.5 - (real_part - ray_part) / pi;
    return std::clamp(p, 0.0, 1.0);
  }

 private:
  double choose_cut() const {
    // Few oscillations of sin(-x u / 2) on the real segment when x is large.
    const double base = std::min(0.5, 8.0 * pi / x_);
    if (ray_growth(n_, base) <= kMaxRayGrowth) return base;
    double lo = base;
    double hi = 0.5 / *std::min_element(n_.weight.begin(), n_.weight.end());
    for (int it = 0; it < 200 && hi > lo * (1.0 + 1e-6); ++it) {
      const double mid = std::sqrt(lo * hi);
      (ray_growth(n_, mid) <= kMaxRayGrowth ? hi : lo) = mid;
    }
    return hi;
  }

  double real_integrand(double u) const {
    double theta = -0.5 * x_ * u;
    double log_rho = 0.0;
    for (std::size_t i = 0; i < n_.weight.size(); ++i) {
      const double wu = n_.weight[i] * u;
      const double lambda = n_.noncentrality[i];
      const double denom = 1.0 + wu * wu;
      theta += 0.5 * (std::atan(wu) + lambda * wu / denom);
      log_rho += 0.25 * std::log1p(wu * wu) + 0.5 * lambda * wu * wu / denom;
    }
    return std::sin(theta) * std::exp(-log_rho) / u;
  }

  // log of an upper bound on int_u^inf dt / (t rho(t)); uses
  // (1 + w^2 t^2)^(1/4) >= sqrt(w t) and monotonicity of the exponential part.
  double log_tail_bound(double u) const {
    const double half_l = 0.5 * static_cast<double>(n_.weight.size());
    double log_bound = -std::log(half_l) - half_l * std::log(u);
    for (std::size_t i = 0; i < n_.weight.size(); ++i) {
      const double wu = n_.weight[i] * u;
      log_bound -= 0.5 * std::log(n_.weight[i]);
      log_bound -= 0.5 * n_.noncentrality[i] * wu * wu / (1.0 + wu * wu);
    }
    return log_bound;
  }

  // Re[h(U - i s)] with h(z) = phi(z / 2) exp(-i z x / 2) / z.
  double ray_integrand(double cut, double s) const {
    const Complex z(cut, -s);
    const Complex i_unit(0.0, 1.0);
    Complex exponent = -i_unit * z * (0.5 * x_);
    for (std::size_t k = 0; k < n_.weight.size(); ++k) {
      const Complex q = 1.0 - i_unit * n_.weight[k] * z;
      exponent += -0.5 * std::log(q) + 0.5 * n_.noncentrality[k] * (1.0 / q - 1.0);
    }
    return (std::exp(exponent) / z).real();
  }

  // log of the bound exp(G) * prod (w_i U)^(-1/2) on |phi| along the ray.
  double ray_log_scale(double cut) const {
    double s = ray_growth(n_, cut);
    for (double w : n_.weight) s -= 0.5 * std::log(std::min(1.0, w * cut));
    return s;
  }

  const Normalized& n_;
  double x_;
};

// Bromwich inversion of the Laplace transform G(s) = E exp(-s Q):
//   P(Q <= x) = 1/(2 pi i) int_{c - i inf}^{c + i inf} G(s) exp(s x) / s ds.
// The line is bent into two rays s = c + r exp(+-i psi), psi = 3 pi / 4, that
// run above and below the branch cuts on (-inf, -1/(2 w_i)]. Along the rays
// exp(s x) decays exponentially, so there is nothing to oscillate. The start
// c is the saddle point of log G(s) + s x, where the integrand magnitude is
// the Chernoff bound; when c < 0 the pole at s = 0 contributes a residue 1.
class SaddleContourInversion {
 public:
  SaddleContourInversion(const Normalized& n, double x) : n_(n), x_(x) {}

  double evaluate() const {
    const double c = choose_start();
    const double residue = c > 0.0 ? 0.0 : 1.0;

    // Chernoff: the tail beyond x is below exp(log_chernoff).
    const double log_chernoff = log_laplace(c) + c * x_;
    if (log_chernoff < -700.0) return residue;

    const double nearest_branch = c + 0.5;  // w_max = 1
    const Complex direction = std::polar(1.0, kAngle);
    auto g = [this, c, direction](double r) {
      const Complex s = c + r * direction;
      return (std::exp(log_laplace(s) + s * x_ - std::log(s)) * direction).imag();
    };

    const double log_bound_scale = log_modulus_bound(c);
    const double decay = kCosine * x_;
    double integral = 0.0;
    double error = 0.0;
    double lo = 0.0;
    double hi = 0.5 * std::min(std::abs(c), nearest_branch);
    for (int segment = 0;; ++segment) {
      const auto r = detail::integrate_adaptive(g, lo, hi, kPanelTolerance, kMaxPanelsPerSegment);
      integral += r.value;
      error += r.error;
      // Tail of the ray beyond hi.
      const double log_tail = log_bound_scale + c * x_ - decay * hi -
                              std::log(decay * kSine * std::abs(c));
      if (log_tail < std::log(kPanelTolerance) || segment > kMaxSegments) {
        error += std::exp(std::min(log_tail, 0.0));
        break;
      }
      lo = hi;
      hi *= 2.0;
    }

    const double achieved = error / pi;
    if (!(achieved <= kContractTolerance)) {
      throw NumericalAccuracyError("quadratic form CDF did not converge", achieved);
    }
    return std::clamp(residue + integral / pi, 0.0, 1.0);
  }

 private:
  static constexpr double kAngle = 0.75 * pi;
  static constexpr double kCosine = 0.70710678118654752;  // -cos(kAngle)
  static constexpr double kSine = 0.70710678118654752;
  // max over the ray of Re(1 / (s - b)) * D for a branch point b at distance D.
  static constexpr double kPeak = 1.2071067811865476;

  template <typename T>
  T log_laplace(T s) const {
    T acc = T(0.0);
    for (std::size_t i = 0; i < n_.weight.size(); ++i) {
      const double w = n_.weight[i];
      const T q = 1.0 + 2.0 * w * s;
      acc += -0.5 * std::log(q) - n_.noncentrality[i] * w * s / q;
    }
    return acc;
  }

  // Root of d/dt [log G(t) + t x] = 0, kept away from the pole at 0.
  double choose_start() const {
    auto slope = [this](double t) {
      double m = 0.0;
      for (std::size_t i = 0; i < n_.weight.size(); ++i) {
        const double w = n_.weight[i];
        const double q = 1.0 + 2.0 * w * t;
        m += w / q + n_.noncentrality[i] * w / (q * q);
      }
      return x_ - m;
    };
    double lo = -0.5;
    double hi = 1.0;
    while (slope(hi) < 0.0 && hi < 1e300) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      (slope(mid) < 0.0 ? lo : hi) = mid;
    }
    // The root approaches the branch point -1/2 as x grows without bound.
    const double c = std::max(0.5 * (lo + hi), -0.5 + 1e-15);
    const double min_start = 0.25 / n_.sd;
    if (std::abs(c) < min_start) return c < 0.0 ? -min_start : min_start;
    return c;
  }

  // log of sup |G(s)| along the rays.
  double log_modulus_bound(double c) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < n_.weight.size(); ++i) {
      const double w = n_.weight[i];
      const double lambda = n_.noncentrality[i];
      const double gap = c + 0.5 / w;
      acc += -0.5 * std::log(std::sqrt(2.0) * w * gap) - 0.5 * lambda +
             kPeak * lambda / (4.0 * w * gap);
    }
    return acc;
  }

  const Normalized& n_;
  double x_;
};

}  // namespace

QuadFormDist::QuadFormDist(std::vector<QuadTerm> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw DomainError("a quadratic form needs at least one term");
  for (const auto& t : terms_) {
    if (!(t.scale > 0.0) || !std::isfinite(t.scale)) {
      throw DomainError("quadratic form scales must be positive and finite");
    }
    if (!std::isfinite(t.offset)) throw DomainError("quadratic form offsets must be finite");
  }
}

double QuadFormDist::mean() const {
  double m = 0.0;
  for (const auto& t : terms_) m += t.scale * t.scale + t.offset * t.offset;
  return m;
}

double QuadFormDist::variance() const {
  double v = 0.0;
  for (const auto& t : terms_) {
    const double a2 = t.scale * t.scale;
    v += 2.0 * a2 * a2 + 4.0 * a2 * t.offset * t.offset;
  }
  return v;
}

double QuadFormDist::sample(Rng& rng) const {
  double q = 0.0;
  for (const auto& t : terms_) {
    const double v = t.scale * rng.normal() + t.offset;
    q += v * v;
  }
  return q;
}

double QuadFormDist::cdf(double x) const {
  if (std::isnan(x)) throw DomainError("cdf argument must not be NaN");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const Normalized n = normalize(terms_);
  const double reduced = (x - n.shift) / n.unit;
  if (!(reduced > 0.0)) return 0.0;
  return SaddleContourInversion(n, reduced).evaluate();
}

double QuadFormDist::cdf_imhof(double x) const {
  if (std::isnan(x)) throw DomainError("cdf argument must not be NaN");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const Normalized n = normalize(terms_);
  const double reduced = (x - n.shift) / n.unit;
  if (!(reduced > 0.0)) return 0.0;
  return ImhofInversion(n, reduced).evaluate();
}

double QuadFormDist::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile probability must lie in (0, 1)");
  const Normalized n = normalize(terms_);
  double lo = n.shift;
  double hi = n.shift + n.unit * (n.mean + 8.0 * n.sd + 1.0);
  for (int it = 0; cdf(hi) < p; ++it) {
    if (it > 200) throw NumericalAccuracyError("quantile bracket search failed", 1.0);
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-13 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double c = cdf(mid);
    if (c == p) return mid;
    (c < p ? lo : hi) = mid;
  }
  const double x = 0.5 * (lo + hi);
  const double achieved = std::abs(cdf(x) - p);
  if (achieved > kContractTolerance) {
    throw NumericalAccuracyError("quantile did not reach the target probability", achieved);
  }
  return x;
}

QuadFormDist QuadFormDist::scaled(double s) const {
  if (!(s > 0.0)) throw DomainError("scale factor must be positive");
  std::vector<QuadTerm> out = terms_;
  for (auto& t : out) {
    t.scale *= s;
    t.offset *= s;
  }
  return QuadFormDist(std::move(out));
}

}  // namespace uwauth
