// Komatsu weight sequences (M_p), the associated function M(t), the
// condition checkers behind the nuclearity verdict, Hermite functions and
// coefficients, and the L^2 seminorm evaluator.

#ifndef TFA_KOMATSU_HPP
#define TFA_KOMATSU_HPP

#include <memory>
#include <string>

#include "tfa/grid.hpp"
#include "tfa/koethe.hpp"
#include "tfa/lattice.hpp"

namespace tfa {

enum class MpFamily { FactorialPower, ExpPoly, Custom };

/// A weight sequence (M_p), stored through its log-domain generator.
class MpSequence {
 public:
  /// M_p = (p!)^s.
  static MpSequence factorial_power(double s, int P_max = 10000) {
    MpSequence m;
    m.family_ = MpFamily::FactorialPower;
    m.name_ = "factorial_power";
    m.s_ = s;
    m.P_max_ = P_max;
    return m;
  }

  /// M_p = e^{c p^r}.
  static MpSequence exp_poly(double c, double r, int P_max = 10000) {
    MpSequence m;
    m.family_ = MpFamily::ExpPoly;
    m.name_ = "exp_poly";
    m.c_ = c;
    m.r_ = r;
    m.P_max_ = P_max;
    return m;
  }

  static MpSequence custom(std::vector<double> log_M) {
    if (log_M.size() < 4) throw std::invalid_argument("MpSequence::custom: need >= 4 entries");
    MpSequence m;
    m.family_ = MpFamily::Custom;
    m.name_ = "custom";
    m.table_ = std::move(log_M);
    m.P_max_ = static_cast<int>(m.table_.size()) - 1;
    return m;
  }

  MpFamily family() const { return family_; }
  const std::string& name() const { return name_; }
  int P_max() const { return P_max_; }

  double log_M(int p) const {
    if (p < 0 || p > P_max_) throw std::domain_error("MpSequence: index out of range");
    switch (family_) {
      case MpFamily::FactorialPower:
        return s_ * std::lgamma(static_cast<double>(p) + 1.0);
      case MpFamily::ExpPoly:
        return c_ * std::pow(static_cast<double>(p), r_);
      case MpFamily::Custom:
        return table_[static_cast<std::size_t>(p)];
    }
    return 0.0;
  }

  /// Proxy for M_p^{1/p} -> infinity: log M_p / p strictly increasing over
  /// the last decade of trusted indices.
  bool divergence_proxy() const {
    const int hi = P_max_, lo = std::max(1, hi / 10);
    double prev = log_M(lo) / lo;
    for (int p = lo + 1; p <= hi; ++p) {
      const double cur = log_M(p) / p;
      if (cur <= prev + 1e-12) return false;
      prev = cur;
    }
    return true;
  }

 private:
  MpFamily family_ = MpFamily::FactorialPower;
  std::string name_;
  double s_ = 2.0, c_ = 1.0, r_ = 2.0;
  int P_max_ = 10000;
  std::vector<double> table_;
};

/// Tabulated associated function M(t) = sup_{p>=1} log(t^p M_0 / M_p) with
/// argmax tracking; evaluate() recomputes the sup at arbitrary t.
class AssociatedFunction {
 public:
  AssociatedFunction(MpSequence parent, std::span<const double> t_grid)
      : parent_(std::move(parent)) {
    t_grid_.assign(t_grid.begin(), t_grid.end());
    values_.reserve(t_grid_.size());
    argmax_p_.reserve(t_grid_.size());
    int hint = 1;
    for (double t : t_grid_) {
      auto [v, p] = sup_at(t, hint);
      hint = p;
      values_.push_back(v);
      argmax_p_.push_back(p);
    }
  }

  const MpSequence& parent() const { return parent_; }
  const std::vector<double>& t_grid() const { return t_grid_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<int>& argmax_p() const { return argmax_p_; }

  bool cap_limited(std::size_t i) const { return argmax_p_[i] >= parent_.P_max(); }

  double cap_limited_fraction() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < argmax_p_.size(); ++i)
      if (cap_limited(i)) ++n;
    return t_grid_.empty() ? 0.0 : static_cast<double>(n) / t_grid_.size();
  }

  /// Brute-force sup at an arbitrary t > 0 (monotone-argmax accelerated).
  double evaluate(double t, bool* capped = nullptr) const {
    auto [v, p] = sup_at(t, 1);
    if (capped) *capped = p >= parent_.P_max();
    return v;
  }

  /// Same sup evaluated at log t directly; usable where t itself would
  /// overflow a double.
  double evaluate_log(double log_t, bool* capped = nullptr) const {
    auto [v, p] = sup_at_log(log_t, 1);
    if (capped) *capped = p >= parent_.P_max();
    return v;
  }

 private:
  std::pair<double, int> sup_at(double t, int hint) const {
    if (t <= 0) throw std::domain_error("AssociatedFunction: t must be > 0");
    return sup_at_log(std::log(t), hint);
  }

  std::pair<double, int> sup_at_log(double lt, int hint) const {
    const double m0 = parent_.log_M(0);
    // the argmax is non-decreasing in t; scan upward from the hint until
    // the objective has fallen well past the running best
    int best_p = std::max(1, hint);
    double best = -inf;
    int start = std::max(1, hint - 2);
    int miss = 0;
    for (int p = start; p <= parent_.P_max(); ++p) {
      const double v = p * lt + m0 - parent_.log_M(p);
      if (v > best) {
        best = v;
        best_p = p;
        miss = 0;
      } else if (++miss > 64) {
        break;  // objective is concave in p past the peak
      }
    }
    // guard: re-scan below the hint in case the hint overshot
    for (int p = start - 1; p >= 1; --p) {
      const double v = p * lt + m0 - parent_.log_M(p);
      if (v > best) {
        best = v;
        best_p = p;
      } else if (best_p < start) {
        break;
      } else {
        break;
      }
    }
    return {best, best_p};
  }

  MpSequence parent_;
  std::vector<double> t_grid_;
  std::vector<double> values_;
  std::vector<int> argmax_p_;
};

inline AssociatedFunction associated_function(const MpSequence& Mp,
                                              std::span<const double> t_grid,
                                              double cap_fraction_limit = 0.05) {
  AssociatedFunction M(Mp, t_grid);
  if (M.cap_limited_fraction() > cap_fraction_limit)
    throw std::runtime_error("associated_function: >5% of nodes cap-limited, raise P_max");
  return M;
}

enum class KomatsuCondition { M1, M2prime, Cond12, Cond43 };

struct ConditionReport {
  KomatsuCondition condition = KomatsuCondition::M1;
  Verdict holds = Verdict::Inconclusive;
  // fitted witnesses, populated when holds == Pass
  double A = 0, H = 0, B = 0, C = 0;
  std::vector<double> evidence;  // residual trace (meaning depends on the condition)
  int failure_index = -1;        // first violating p (exact checks)
};

/// (M1) log-convexity: M_p^2 <= M_{p-1} M_{p+1}, exact in the log domain.
inline ConditionReport check_M1(const MpSequence& Mp, int P) {
  if (P > Mp.P_max() - 1) throw std::invalid_argument("check_M1: P out of range");
  ConditionReport rep;
  rep.condition = KomatsuCondition::M1;
  rep.holds = Verdict::Pass;
  for (int p = 1; p <= P; ++p) {
    const double lhs = 2 * Mp.log_M(p);
    const double rhs = Mp.log_M(p - 1) + Mp.log_M(p + 1);
    rep.evidence.push_back(lhs - rhs);
    if (lhs > rhs + 1e-12) {
      rep.holds = Verdict::Fail;
      if (rep.failure_index < 0) rep.failure_index = p;
    }
  }
  return rep;
}

/// (M2)' stability: M_{p+1} <= A H^p M_p. Decided through the growth order
/// of the log-ratios r_p = log M_{p+1} - log M_p: at most linear growth
/// passes (H from a least-squares fit plus margin), superlinear growth
/// over the last decade fails.
inline ConditionReport check_M2prime(const MpSequence& Mp, int P) {
  if (P > Mp.P_max() - 1) throw std::invalid_argument("check_M2prime: P out of range");
  ConditionReport rep;
  rep.condition = KomatsuCondition::M2prime;
  std::vector<double> r(static_cast<std::size_t>(P) + 1, 0.0);
  for (int p = 0; p <= P; ++p) r[static_cast<std::size_t>(p)] = Mp.log_M(p + 1) - Mp.log_M(p);

  // superlinear test: r_p / p monotone increasing with growing increments
  // over the last decade
  {
    const int lo = std::max(1, P / 2);
    bool monotone = true;
    for (int p = lo + 1; p <= P; ++p)
      if (r[static_cast<std::size_t>(p)] / p <= r[static_cast<std::size_t>(p - 1)] / (p - 1) + 1e-12)
        monotone = false;
    const double growth = r[static_cast<std::size_t>(P)] / P - r[static_cast<std::size_t>(lo)] / lo;
    if (monotone && growth > 0.05 * std::abs(r[static_cast<std::size_t>(lo)] / lo) + 1e-9) {
      rep.holds = Verdict::Fail;
      return rep;
    }
  }

  // linear fit r_p ~ alpha + beta p on [P/2, P], slack delta = 0.1
  std::vector<double> xs, ys;
  for (int p = P / 2; p <= P; ++p) {
    xs.push_back(static_cast<double>(p));
    ys.push_back(r[static_cast<std::size_t>(p)]);
  }
  const LineFit fit = fit_line(xs, ys);
  const double delta = 0.1;
  const double slope = std::max(0.0, fit.slope) + delta;
  double max_resid = -inf;
  for (int p = 0; p <= P; ++p)
    max_resid = std::max(max_resid, r[static_cast<std::size_t>(p)] - slope * p);
  rep.evidence.push_back(fit.slope);
  rep.evidence.push_back(max_resid);
  if (std::isfinite(max_resid)) {
    rep.holds = Verdict::Pass;
    rep.H = std::exp(slope);
    rep.A = std::exp(max_resid);
  }
  return rep;
}

/// Condition s^{s/2} M_p <= B C^s H^{s+p} M_{s+p} for all s, p: finite
/// H-candidate sweep against a decreasing C ladder, with stabilization of
/// the required B at two truncations.
inline ConditionReport check_12L(const MpSequence& Mp, int P,
                                 std::span<const double> H_candidates,
                                 std::span<const double> C_ladder) {
  if (P > Mp.P_max() / 2) throw std::invalid_argument("check_12L: P must be <= P_max/2");
  ConditionReport rep;
  rep.condition = KomatsuCondition::Cond12;
  std::vector<double> lm(static_cast<std::size_t>(2 * P) + 1);
  for (int p = 0; p <= 2 * P; ++p) lm[static_cast<std::size_t>(p)] = Mp.log_M(p);
  auto B_required = [&](double H, double C, int Pcap) {
    double worst = -inf;
    for (int s = 0; s <= Pcap; ++s)
      for (int p = 0; p <= Pcap; ++p) {
        const double lhs = (s > 0 ? 0.5 * s * std::log(static_cast<double>(s)) : 0.0) +
                           lm[static_cast<std::size_t>(p)] - lm[static_cast<std::size_t>(s + p)] -
                           s * std::log(C) - (s + p) * std::log(H);
        worst = std::max(worst, lhs);
      }
    return worst;
  };
  for (double H : H_candidates) {
    bool ok = true;
    double worstB = -inf;
    for (double C : C_ladder) {
      const double b_full = B_required(H, C, P);
      const double b_half = B_required(H, C, P / 2);
      rep.evidence.push_back(b_full);
      // stabilized when the doubled truncation changes log B by < 1%
      const double denom = std::max(1.0, std::abs(b_half));
      if (!std::isfinite(b_full) || (b_full - b_half) / denom > 0.01) {
        ok = false;
        break;
      }
      worstB = std::max(worstB, b_full);
    }
    if (ok) {
      rep.holds = Verdict::Pass;
      rep.H = H;
      rep.C = C_ladder.empty() ? 1.0 : C_ladder.back();
      rep.B = std::exp(worstB);
      return rep;
    }
  }
  rep.holds = Verdict::Inconclusive;
  return rep;
}

/// Condition M(t) + log t <= M(Ht) + H for all t, checked on a t-grid;
/// reports the smallest passing H among the candidates. Because any
/// bounded grid satisfies the inequality vacuously once H > max log t,
/// passing additionally requires the residual trend over the top half of
/// the grid to be non-increasing — an upward-trending residual means the
/// inequality fails beyond the grid even though every node is negative.
inline ConditionReport check_43(const AssociatedFunction& M, std::span<const double> t_grid,
                                std::span<const double> H_candidates) {
  ConditionReport rep;
  rep.condition = KomatsuCondition::Cond43;
  for (double H : H_candidates) {
    if (!(H > 1)) throw std::invalid_argument("check_43: H candidates must be > 1");
    // The residual M(t) + log t - M(Ht) - H carries -H additively, so on a
    // bounded t-grid every large H passes vacuously. Extend the scan in the
    // log-t domain well past H itself, where a failing sequence's residual
    // must eventually turn positive.
    std::vector<double> lts;
    for (double t : t_grid) lts.push_back(std::log(t));
    const double lt_hi = *std::max_element(lts.begin(), lts.end());
    const double lh = std::log(H);
    const double lt_ext = std::max(lt_hi, 3.0 * (H + (1.0 + lh) * (1.0 + lh)));
    for (double lt : linspace(lt_hi, lt_ext, 64)) lts.push_back(lt);

    double max_resid = -inf;
    std::size_t usable = 0;
    for (double lt : lts) {
      bool c1 = false, c2 = false;
      const double mt = M.evaluate_log(lt, &c1);
      const double mht = M.evaluate_log(lt + lh, &c2);
      if (c1 || c2) continue;  // cap-limited nodes excluded
      max_resid = std::max(max_resid, mt + lt - mht - H);
      ++usable;
    }
    rep.evidence.push_back(max_resid);
    if (usable >= 8 && max_resid <= 1e-9) {
      rep.holds = Verdict::Pass;
      rep.H = H;
      return rep;
    }
  }
  rep.holds = Verdict::Fail;
  return rep;
}

/// Theorem-4.3-style verdict: preconditions (divergence proxy, (M1),
/// (1.2)-condition), then (M2)' decides, with the (4.3) checker as an
/// independent cross-check that must agree.
struct KomatsuVerdict {
  bool applicable = false;
  bool nuclear = false;
  bool consistent = true;  // false: (M2)' and (4.3) checkers disagree
  ConditionReport m1, cond12, m2prime, cond43;
};

inline KomatsuVerdict nuclearity_verdict(const MpSequence& Mp, int P = 400) {
  KomatsuVerdict v;
  if (!Mp.divergence_proxy()) return v;
  const int Pc = std::min(P, Mp.P_max() - 1);
  v.m1 = check_M1(Mp, Pc);
  if (v.m1.holds != Verdict::Pass) return v;
  const std::vector<double> Hs{2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
  const std::vector<double> Cs{1.0, 0.5, 0.25, 0.125};
  v.cond12 = check_12L(Mp, std::min(Pc, Mp.P_max() / 2), Hs, Cs);
  if (v.cond12.holds != Verdict::Pass) return v;
  v.applicable = true;

  v.m2prime = check_M2prime(Mp, Pc);
  const auto t_grid = logspace(1e-2, 1e3, 512);
  AssociatedFunction M(Mp, t_grid);
  v.cond43 = check_43(M, t_grid, Hs);
  v.nuclear = v.m2prime.holds == Verdict::Pass;
  const bool agree = (v.m2prime.holds == Verdict::Pass) == (v.cond43.holds == Verdict::Pass);
  v.consistent = agree || v.m2prime.holds == Verdict::Inconclusive;
  return v;
}

// ---------------------------------------------------------------------------
// Hermite layer

/// Orthonormal Hermite function H_gamma on the grid, evaluated through the
/// stable normalized three-term recurrence per coordinate and tensorized:
///   psi_0(x) = pi^{-1/4} e^{-x^2/2},
///   psi_{n+1}(x) = sqrt(2/(n+1)) x psi_n(x) - sqrt(n/(n+1)) psi_{n-1}(x).
inline double hermite_value_1d(int n, double x) {
  double prev = 0.0;
  double cur = std::pow(pi, -0.25) * std::exp(-x * x / 2);
  for (int j = 0; j < n; ++j) {
    const double next =
        std::sqrt(2.0 / (j + 1)) * x * cur - std::sqrt(static_cast<double>(j) / (j + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

inline SampledFunction hermite_function(std::span<const int> gamma, int d, double h, double R) {
  for (int g : gamma)
    if (g < 0 || g > 60)
      throw std::invalid_argument("hermite_function: order outside the stability budget [0,60]");
  return SampledFunction::from_fn(d, h, R, [&](std::span<const double> x) {
    double v = 1.0;
    for (int a = 0; a < d; ++a) v *= hermite_value_1d(gamma[a], x[a]);
    return cplx{v, 0};
  });
}

inline SampledFunction hermite_function_1d(int n, double h = 1.0 / 64, double R = 12) {
  const int g[1] = {n};
  return hermite_function(g, 1, h, R);
}

/// Hermite coefficients xi_gamma = int f(x) H_gamma(x) dx for |gamma|_inf <= Gamma.
inline MultiIndexArray hermite_coefficients(const SampledFunction& f, int Gamma) {
  const int d = f.d(), n = f.n_per_axis();
  MultiIndexArray xi(d, Gamma);
  // per-axis table of psi_g(x_j)
  std::vector<std::vector<double>> tab(static_cast<std::size_t>(Gamma) + 1,
                                       std::vector<double>(static_cast<std::size_t>(n)));
  for (int j = 0; j < n; ++j) {
    const double x = f.coord(j);
    double prev = 0.0, cur = std::pow(pi, -0.25) * std::exp(-x * x / 2);
    for (int g = 0; g <= Gamma; ++g) {
      tab[static_cast<std::size_t>(g)][static_cast<std::size_t>(j)] = cur;
      const double next =
          std::sqrt(2.0 / (g + 1)) * x * cur - std::sqrt(static_cast<double>(g) / (g + 1)) * prev;
      prev = cur;
      cur = next;
    }
  }
  const double cell = f.cell_volume();
  for_each_index(0, Gamma, d, [&](std::span<const int> g) {
    cplx acc{0, 0};
    for_each_index(0, n - 1, d, [&](std::span<const int> j) {
      double w = 1.0;
      for (int a = 0; a < d; ++a)
        w *= tab[static_cast<std::size_t>(g[a])][static_cast<std::size_t>(j[a])];
      acc += f.values()[f.flat(j)] * w;
    });
    xi.at(g) = acc * cell;
  });
  return xi;
}

/// The reconstruction map T: (c_gamma) -> sum c_gamma H_gamma on the grid.
inline SampledFunction hermite_synthesis(const MultiIndexArray& c, int d, double h, double R) {
  SampledFunction out(d, h, R);
  const int n = out.n_per_axis();
  const int Gamma = c.Gamma();
  std::vector<std::vector<double>> tab(static_cast<std::size_t>(Gamma) + 1,
                                       std::vector<double>(static_cast<std::size_t>(n)));
  for (int j = 0; j < n; ++j) {
    const double x = out.coord(j);
    double prev = 0.0, cur = std::pow(pi, -0.25) * std::exp(-x * x / 2);
    for (int g = 0; g <= Gamma; ++g) {
      tab[static_cast<std::size_t>(g)][static_cast<std::size_t>(j)] = cur;
      const double next =
          std::sqrt(2.0 / (g + 1)) * x * cur - std::sqrt(static_cast<double>(g) / (g + 1)) * prev;
      prev = cur;
      cur = next;
    }
  }
  c.for_each([&](std::span<const int> g, cplx coeff) {
    if (coeff == cplx{0, 0}) return;
    for_each_index(0, n - 1, d, [&](std::span<const int> j) {
      double w = 1.0;
      for (int a = 0; a < d; ++a)
        w *= tab[static_cast<std::size_t>(g[a])][static_cast<std::size_t>(j[a])];
      out.values()[out.flat(j)] += coeff * w;
    });
  });
  return out;
}

/// The Hermite-side Koethe matrix a_{gamma,k} = e^{M(k |gamma|^{1/2})},
/// |gamma| the order gamma_1 + ... + gamma_d.
inline KoetheMatrix koethe_hermite(std::shared_ptr<const AssociatedFunction> M, int d) {
  KoetheMatrix A;
  A.set = KoetheMatrix::IndexSet::MultiIndex;
  A.d = d;
  A.name = "hermite";
  A.log_entry = [M](std::span<const int> idx, int k) {
    int order = 0;
    for (int g : idx) order += g;
    if (order == 0) return 0.0;
    return M->evaluate(k * std::sqrt(static_cast<double>(order)));
  };
  return A;
}

struct HermiteDecayEntry {
  int k = 0;
  double sup_full = 0;
  double sup_half = 0;
  bool divergent = false;
};

/// lambda^inf(A*) membership diagnostic: per k, sup_gamma |xi_gamma|
/// e^{M(k |gamma|^{1/2})} with the truncation-growth heuristic.
inline std::vector<HermiteDecayEntry> hermite_decay_check(const MultiIndexArray& xi,
                                                          const AssociatedFunction& M,
                                                          std::span<const int> k_ladder) {
  std::vector<HermiteDecayEntry> table;
  const int Gamma = xi.Gamma();
  for (int k : k_ladder) {
    HermiteDecayEntry e;
    e.k = k;
    xi.for_each([&](std::span<const int> g, cplx z) {
      const double a = std::abs(z);
      if (a == 0) return;
      int order = 0;
      for (int gg : g) order += gg;
      const double lw = order == 0 ? 0.0 : M.evaluate(k * std::sqrt(static_cast<double>(order)));
      const double v = std::exp(std::log(a) + lw);
      e.sup_full = std::max(e.sup_full, v);
      if (sup_norm(g) <= Gamma / 2) e.sup_half = std::max(e.sup_half, v);
    });
    e.divergent = e.sup_half > 0 && e.sup_full > 1.10 * e.sup_half;
    table.push_back(e);
  }
  return table;
}

struct SeminormResult {
  double value = 0;
  bool stabilized = false;
  std::vector<double> running_max;  // per total order
};

/// Eq.-(4.1) seminorm with L^2 norms, d = 1:
///   max over a+b <= order_cap of j^{a+b}/M_{a+b} ||x^a f^{(b)}||_2,
/// derivatives via FFT spectral differentiation.
inline SeminormResult seminorm_SMp(const SampledFunction& f, const MpSequence& Mp, double j,
                                   int order_cap = 12) {
  if (f.d() != 1) throw std::invalid_argument("seminorm_SMp: d = 1 only");
  if (order_cap > 12) throw std::invalid_argument("seminorm_SMp: order_cap <= 12");
  auto fhat = fourier_transform(f).value;
  const int n = f.n_per_axis();

  // derivative L2 norms: ||f^(b)||-type factors come in through x^a weights
  std::vector<SampledFunction> derivs;
  derivs.reserve(static_cast<std::size_t>(order_cap) + 1);
  for (int b = 0; b <= order_cap; ++b) {
    SampledFunction g = fhat;
    for (int m = 0; m < n; ++m) {
      const cplx ixi{0.0, fhat.coord(m)};
      cplx mult{1, 0};
      for (int t = 0; t < b; ++t) mult *= ixi;
      g.values()[static_cast<std::size_t>(m)] *= mult;
    }
    derivs.push_back(inverse_fourier_transform(g).value);
  }

  SeminormResult res;
  double running = 0;
  for (int order = 0; order <= order_cap; ++order) {
    for (int b = 0; b <= order; ++b) {
      const int a = order - b;
      double s = 0;
      const auto& gb = derivs[static_cast<std::size_t>(b)];
      for (int m = 0; m < n; ++m) {
        const double x = f.coord(m);
        s += std::norm(gb.values()[static_cast<std::size_t>(m)]) * std::pow(x * x, a);
      }
      const double l2 = std::sqrt(s * f.h());
      const double term = std::exp(order * std::log(j) - Mp.log_M(order)) * l2;
      running = std::max(running, term);
    }
    res.running_max.push_back(running);
  }
  res.value = running;
  const std::size_t m = res.running_max.size();
  res.stabilized = m >= 3 && res.running_max[m - 1] <= res.running_max[m - 3] * (1 + 1e-9);
  return res;
}

}  // namespace tfa

#endif  // TFA_KOMATSU_HPP
