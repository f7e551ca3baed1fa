// Weight functions: growth laws omega(t) with certified structural
// constants, tail verdicts and Young conjugate tables.

#ifndef TFA_WEIGHTS_HPP
#define TFA_WEIGHTS_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "tfa/common.hpp"

namespace tfa {

enum class WeightFamily { LogPower, GevreyRoot, Custom };

/// A continuous increasing growth law omega: [0, inf) -> [0, inf).
/// Structural constants (L for doubling, (a, b) for the logarithmic
/// lower bound) are filled in by the certify_* routines; certificates
/// are grid-relative and carry the hash of the grid they were run on.
class WeightFunction {
 public:
  static WeightFunction log_power(double beta, double cap = 1e6) {
    if (beta <= 0) throw std::invalid_argument("log_power: beta must be > 0");
    WeightFunction w;
    w.family_ = WeightFamily::LogPower;
    w.param_ = beta;
    w.cap_ = cap;
    return w;
  }

  /// omega(t) = t^{1/s}, s > 1.
  static WeightFunction gevrey_root(double s, double cap = 1e6) {
    if (s <= 1) throw std::invalid_argument("gevrey_root: s must be > 1");
    WeightFunction w;
    w.family_ = WeightFamily::GevreyRoot;
    w.param_ = s;
    w.cap_ = cap;
    return w;
  }

  /// Piecewise-linear interpolant of monotone samples (t_i, w_i).
  /// Samples must start at t = 0 and be non-decreasing in both columns.
  static WeightFunction custom(std::vector<std::pair<double, double>> samples) {
    if (samples.size() < 2) throw std::invalid_argument("custom: need >= 2 samples");
    if (samples.front().first != 0.0)
      throw std::invalid_argument("custom: samples must start at t = 0");
    for (std::size_t i = 1; i < samples.size(); ++i) {
      if (samples[i].first <= samples[i - 1].first)
        throw std::invalid_argument("custom: t samples must be strictly increasing");
      if (samples[i].second < samples[i - 1].second - 1e-12)
        throw std::invalid_argument("custom: weight samples must be non-decreasing");
    }
    if (samples.front().second < 0)
      throw std::invalid_argument("custom: weight must be non-negative");
    WeightFunction w;
    w.family_ = WeightFamily::Custom;
    w.samples_ = std::move(samples);
    w.cap_ = w.samples_.back().first;
    return w;
  }

  WeightFamily family() const { return family_; }
  double param() const { return param_; }
  double domain_cap() const { return cap_; }

  double operator()(double t) const {
    if (t < 0 || t > cap_ * (1 + 1e-12))
      throw std::domain_error("weight: t outside [0, domain_cap]");
    switch (family_) {
      case WeightFamily::LogPower:
        return std::pow(std::log1p(t), param_);
      case WeightFamily::GevreyRoot:
        return std::pow(t, 1.0 / param_);
      case WeightFamily::Custom: {
        auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                                   [](double x, const auto& s) { return x < s.first; });
        if (it == samples_.begin()) return samples_.front().second;
        if (it == samples_.end()) return samples_.back().second;
        const auto& [t1, w1] = *it;
        const auto& [t0, w0] = *(it - 1);
        return w0 + (w1 - w0) * (t - t0) / (t1 - t0);
      }
    }
    return 0.0;
  }

  /// phi_omega(t) = omega(e^t), the exponential substitution behind the
  /// Young conjugate.
  double phi(double t) const { return (*this)(std::exp(t)); }

  std::optional<double> L() const { return L_; }
  std::optional<std::pair<double, double>> gamma_constants() const { return gamma_; }
  std::uint64_t certificate_grid_hash() const { return grid_hash_; }

  void set_L(double L, std::uint64_t grid_hash) {
    L_ = L;
    grid_hash_ = grid_hash;
  }
  void set_gamma(double a, double b, std::uint64_t grid_hash) {
    gamma_ = {a, b};
    grid_hash_ = grid_hash;
  }

 private:
  WeightFamily family_ = WeightFamily::LogPower;
  double param_ = 1.0;
  double cap_ = 1e6;
  std::vector<std::pair<double, double>> samples_;
  std::optional<double> L_;
  std::optional<std::pair<double, double>> gamma_;
  std::uint64_t grid_hash_ = 0;
};

struct AlphaCertificate {
  bool ok = false;
  double L = 0;  // smallest L >= 1 with omega(2t) <= L(omega(t)+1) on the grid
};

/// Certifies condition (alpha) by bisection on L over [1, L_cap].
inline AlphaCertificate certify_alpha(WeightFunction& w, std::span<const double> t_grid,
                                      double L_cap = 1e6) {
  auto holds = [&](double L) {
    for (double t : t_grid) {
      if (2 * t > w.domain_cap()) continue;
      if (w(2 * t) > L * (w(t) + 1.0) + 1e-12) return false;
    }
    return true;
  };
  AlphaCertificate cert;
  if (!holds(L_cap)) return cert;  // condition-failure: no finite L below cap
  double lo = 1.0, hi = L_cap;
  if (holds(lo)) {
    cert.ok = true;
    cert.L = 1.0;
  } else {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (holds(mid) ? hi : lo) = mid;
    }
    cert.ok = true;
    cert.L = hi;
  }
  w.set_L(cert.L, hash_doubles(t_grid));
  return cert;
}

struct GammaCertificate {
  bool ok = false;
  double a = 0, b = 0;
};

/// Certifies condition (gamma): maximizes b with omega(t) >= a + b log(1+t)
/// viable on the grid, then a = min over the grid of omega(t) - b log(1+t).
/// b is viable when the deficit omega - b log(1+t) is not still falling at
/// the grid tail (on a finite grid every b admits a finite minimum, so
/// viability has to look at the tail trend).
namespace detail {

/// Largest viable b on the given grid, or nothing when only b <= 0 works.
/// b is viable when the deficit omega - b log(1+t) is not still falling at
/// the grid tail (on a finite grid every b admits a finite minimum, so
/// viability has to look at the tail trend).
inline std::optional<double> best_gamma_b(const WeightFunction& w,
                                          std::span<const double> t_grid) {
  const std::size_t n = t_grid.size();
  auto viable = [&](double b) {
    auto g = [&](double t) { return w(t) - b * std::log1p(t); };
    const std::size_t i80 = (n * 8) / 10, i90 = (n * 9) / 10;
    double m1 = inf, m2 = inf;
    for (std::size_t i = i80; i < i90; ++i) m1 = std::min(m1, g(t_grid[i]));
    for (std::size_t i = i90; i < n; ++i) m2 = std::min(m2, g(t_grid[i]));
    const double tol = 1e-9 * std::max(1.0, std::abs(m1));
    return m2 >= m1 - tol;
  };
  double b_hi = 0;
  for (double t : t_grid)
    if (t > 0) b_hi = std::max(b_hi, w(t) / std::log1p(t));
  b_hi += 1.0;
  double lo = 1e-9;
  if (!viable(lo)) return std::nullopt;
  double hi = b_hi;
  if (viable(hi)) return hi;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (viable(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace detail

inline GammaCertificate certify_gamma(WeightFunction& w, std::span<const double> t_grid) {
  const std::size_t n = t_grid.size();
  if (n < 32) throw std::invalid_argument("certify_gamma: grid too small");
  GammaCertificate cert;
  const auto b_full = detail::best_gamma_b(w, t_grid);
  if (!b_full) return cert;
  // trend in the cap: weights with omega(t)/log(1+t) -> 0 admit a spurious
  // grid-scale b that shrinks as the grid extends; reject when b drops by
  // more than 25% against the first half of the (log-spaced) grid
  const auto b_half = detail::best_gamma_b(w, t_grid.subspan(0, n / 2));
  if (b_half && *b_full < 0.75 * *b_half) return cert;
  cert.ok = true;
  cert.b = *b_full;
  double a = inf;
  for (double t : t_grid) a = std::min(a, w(t) - cert.b * std::log1p(t));
  cert.a = a;
  w.set_gamma(cert.a, cert.b, hash_doubles(t_grid));
  return cert;
}

struct TailReport {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::pair<double, double>> trace;  // (t, ratio) on the grid tail
};

namespace detail {

/// Common o(.)-protocol: pass when the tail ratio has dropped below eps,
/// fail when the tail is not decreasing, inconclusive otherwise.
inline TailReport tail_verdict(std::span<const double> ts, std::span<const double> ratios,
                               double eps) {
  TailReport rep;
  const std::size_t n = ratios.size();
  if (n < 8) return rep;
  const std::size_t tail_start = (n * 8) / 10;
  for (std::size_t i = tail_start; i < n; ++i) rep.trace.emplace_back(ts[i], ratios[i]);
  double tail_max = 0;
  for (std::size_t i = tail_start; i < n; ++i) tail_max = std::max(tail_max, ratios[i]);
  const double r_mid = ratios[tail_start], r_end = ratios[n - 1];
  // pass: the whole tail is already below eps, or the ratio ends below eps
  // after at least halving across the tail (decay is still in progress at
  // the tail's start but clearly heading to zero)
  if (tail_max <= eps || (r_end <= eps && r_end <= 0.5 * r_mid)) {
    rep.verdict = Verdict::Pass;
    return rep;
  }
  if (r_end > 0.99 * r_mid)
    rep.verdict = Verdict::Fail;  // tail not decreasing
  else
    rep.verdict = Verdict::Inconclusive;
  return rep;
}

}  // namespace detail

/// Condition (beta): omega(t) = o(t), decided from the ratio trace on the
/// grid tail.
inline TailReport check_little_o(const WeightFunction& w, std::span<const double> t_grid,
                                 double eps = 1e-2) {
  std::vector<double> ts, ratios;
  for (double t : t_grid)
    if (t > 0) {
      ts.push_back(t);
      ratios.push_back(w(t) / t);
    }
  return detail::tail_verdict(ts, ratios, eps);
}

/// Checks omega1(t) = o(omega2(t)) along the grid tail (same protocol).
inline TailReport compare_weights(const WeightFunction& w1, const WeightFunction& w2,
                                  std::span<const double> t_grid, double eps = 1e-2) {
  std::vector<double> ts, ratios;
  for (double t : t_grid) {
    if (t <= 0) continue;
    const double denom = w2(t);
    if (denom < 1e-12) continue;  // guard division
    ts.push_back(t);
    ratios.push_back(w1(t) / denom);
  }
  return detail::tail_verdict(ts, ratios, eps);
}

/// Tabulated Young conjugate phi*(s) = sup_t { t s - phi(t) } with the
/// maximizing t per node.
struct YoungConjugateTable {
  std::vector<double> s_grid;
  std::vector<double> values;
  std::vector<double> argmax_t;
  std::vector<bool> cap_limited;  // maximizer pinned at the t-grid boundary

  /// Discrete conjugate of this table: sup_s { s t - phi*(s) } over s_grid.
  double conjugate_at(double t) const {
    double best = -inf;
    for (std::size_t i = 0; i < s_grid.size(); ++i)
      best = std::max(best, s_grid[i] * t - values[i]);
    return best;
  }
};

inline YoungConjugateTable young_conjugate(const WeightFunction& w,
                                           std::span<const double> s_grid) {
  const double t_max = std::log(w.domain_cap());
  // coarse log-spaced t sweep plus t = 0, then three 10x refinement passes
  std::vector<double> coarse;
  coarse.push_back(0.0);
  for (double t : logspace(1e-6, t_max, 2048)) coarse.push_back(t);

  YoungConjugateTable tab;
  tab.s_grid.assign(s_grid.begin(), s_grid.end());
  for (double s : s_grid) {
    auto objective = [&](double t) { return t * s - w.phi(t); };
    std::size_t best_i = 0;
    double best_v = -inf;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      const double v = objective(coarse[i]);
      if (v > best_v) {
        best_v = v;
        best_i = i;
      }
    }
    double lo = coarse[best_i == 0 ? 0 : best_i - 1];
    double hi = coarse[std::min(best_i + 1, coarse.size() - 1)];
    double best_t = coarse[best_i];
    for (int pass = 0; pass < 3; ++pass) {
      const std::size_t m = 21;  // 10x finer per pass
      for (std::size_t j = 0; j < m; ++j) {
        const double t = lo + (hi - lo) * static_cast<double>(j) / (m - 1);
        const double v = objective(t);
        if (v > best_v) {
          best_v = v;
          best_t = t;
        }
      }
      const double step = (hi - lo) / (m - 1);
      lo = std::max(0.0, best_t - step);
      hi = std::min(t_max, best_t + step);
    }
    tab.values.push_back(best_v);
    tab.argmax_t.push_back(best_t);
    tab.cap_limited.push_back(best_t >= t_max * (1 - 1e-6));
  }
  return tab;
}

}  // namespace tfa

#endif  // TFA_WEIGHTS_HPP
