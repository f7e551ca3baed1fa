// Koethe-type matrices on countable index sets, weighted sequence norms,
// and the Grothendieck-Pietsch summability test.

#ifndef TFA_KOETHE_HPP
#define TFA_KOETHE_HPP

#include <functional>
#include <string>

#include "tfa/lattice.hpp"
#include "tfa/weights.hpp"

namespace tfa {

/// A positive matrix a_{sigma,k} (sigma in a countable lattice, k in N),
/// non-decreasing in k, evaluated in the log domain. The index set is
/// either the time-frequency lattice alpha0 Z^d x beta0 Z^d (integer index
/// vector of length 2d) or multi-indices gamma in N_0^d (length d).
struct KoetheMatrix {
  enum class IndexSet { Lattice2d, MultiIndex };

  IndexSet set = IndexSet::Lattice2d;
  int d = 1;
  double alpha0 = 1.0, beta0 = 1.0;  // lattice scaling (Lattice2d only)
  std::string name;
  // log a_{sigma,k}; idx is the raw integer index vector
  std::function<double(std::span<const int> idx, int k)> log_entry;

  int index_len() const { return set == IndexSet::Lattice2d ? 2 * d : d; }

  /// Euclidean norm of the scaled index point.
  double sigma_norm(std::span<const int> idx) const {
    double s = 0;
    if (set == IndexSet::Lattice2d) {
      for (int a = 0; a < d; ++a) s += alpha0 * alpha0 * static_cast<double>(idx[a]) * idx[a];
      for (int a = 0; a < d; ++a)
        s += beta0 * beta0 * static_cast<double>(idx[d + a]) * idx[d + a];
    } else {
      for (int v : idx) s += static_cast<double>(v) * v;
    }
    return std::sqrt(s);
  }

  /// Runs fn over the sup-norm shell |idx|_inf = r (>= 0 components for
  /// MultiIndex sets).
  void for_each_on_shell(int r, const std::function<void(std::span<const int>)>& fn) const {
    const int len = index_len();
    const int lo = set == IndexSet::MultiIndex ? 0 : -r;
    for_each_index(lo, r, len, [&](std::span<const int> idx) {
      if (sup_norm(idx) == r) fn(idx);
    });
  }
};

/// The weight-generated matrix a_{sigma,k} = e^{k omega(|sigma|)}.
inline KoetheMatrix koethe_from_weight(const WeightFunction& w, const LatticeSpec& lat) {
  if (!w.gamma_constants())
    throw std::invalid_argument("koethe_from_weight: weight needs a (gamma) certificate");
  KoetheMatrix A;
  A.set = KoetheMatrix::IndexSet::Lattice2d;
  A.d = lat.d;
  A.alpha0 = lat.alpha0;
  A.beta0 = lat.beta0;
  A.name = "weight";
  A.log_entry = [w, A](std::span<const int> idx, int k) {
    return k * w(std::min(A.sigma_norm(idx), w.domain_cap()));
  };
  return A;
}

/// a_{sigma,k} = (1+|sigma|)^k.
inline KoetheMatrix koethe_power(const LatticeSpec& lat) {
  KoetheMatrix A;
  A.set = KoetheMatrix::IndexSet::Lattice2d;
  A.d = lat.d;
  A.alpha0 = lat.alpha0;
  A.beta0 = lat.beta0;
  A.name = "power";
  A.log_entry = [A](std::span<const int> idx, int k) {
    return k * std::log1p(A.sigma_norm(idx));
  };
  return A;
}

/// a_{sigma,k} = e^k, constant in sigma (divergent reference case).
inline KoetheMatrix koethe_constant(const LatticeSpec& lat) {
  KoetheMatrix A;
  A.set = KoetheMatrix::IndexSet::Lattice2d;
  A.d = lat.d;
  A.alpha0 = lat.alpha0;
  A.beta0 = lat.beta0;
  A.name = "constant";
  A.log_entry = [](std::span<const int>, int k) { return static_cast<double>(k); };
  return A;
}

/// Truncated lambda^p(A) norm, p in {1, inf}; log-domain accumulation.
inline double lambda_norm(const CoefficientArray& c, const KoetheMatrix& A, int k, double p) {
  const auto& lat = c.lattice();
  if (A.set != KoetheMatrix::IndexSet::Lattice2d || A.d != lat.d)
    throw std::invalid_argument("lambda_norm: index set mismatch");
  double log_acc = -inf;  // log of the running sum (p=1) or max (p=inf)
  std::vector<int> idx(static_cast<std::size_t>(2 * lat.d));
  c.for_each([&](std::span<const int> kk, std::span<const int> nn, cplx z) {
    const double a = std::abs(z);
    if (a == 0) return;
    for (int i = 0; i < lat.d; ++i) idx[static_cast<std::size_t>(i)] = kk[i];
    for (int i = 0; i < lat.d; ++i) idx[static_cast<std::size_t>(lat.d + i)] = nn[i];
    const double lt = std::log(a) + A.log_entry(idx, k);
    if (std::isinf(p)) {
      log_acc = std::max(log_acc, lt);
    } else {
      // log-sum-exp update
      if (lt > log_acc) {
        log_acc = lt + std::log1p(std::exp(log_acc - lt));
      } else {
        log_acc += std::log1p(std::exp(lt - log_acc));
      }
    }
  });
  if (log_acc == -inf) return 0.0;
  const double r = std::exp(log_acc);
  return std::isfinite(r) ? r : inf;
}

/// Outcome of the Grothendieck-Pietsch partial-sum scan for one (k, m).
struct GPReport {
  int k = 0;
  std::optional<int> m_found;
  // cumulative partial sums at each requested radius, for the found m (or
  // the last candidate when none converges)
  std::vector<std::pair<int, double>> partial_sums;
  Verdict verdict = Verdict::Inconclusive;
  double extrapolated_tail = 0;
  // per-candidate verdicts, in candidate order
  std::vector<std::pair<int, Verdict>> candidates;
};

namespace detail {

struct ShellScan {
  std::vector<double> block_sums;  // annulus sums between successive radii
  std::vector<double> partial;     // cumulative sums at each radius
};

inline ShellScan scan_ratio_series(const KoetheMatrix& A, int k, int m,
                                   std::span<const int> radii) {
  ShellScan s;
  double cum = 0;
  int prev = -1;
  for (int R : radii) {
    double block = 0;
    for (int r = prev + 1; r <= R; ++r)
      A.for_each_on_shell(r, [&](std::span<const int> idx) {
        block += std::exp(A.log_entry(idx, k) - A.log_entry(idx, m));
      });
    cum += block;
    s.block_sums.push_back(block);
    s.partial.push_back(cum);
    prev = R;
  }
  return s;
}

/// Geometric-decay verdict on annulus sums: convergent when the last three
/// block ratios stay below r_max, divergent when blocks are non-decreasing.
inline Verdict block_verdict(std::span<const double> blocks, double r_max, double& tail) {
  tail = 0;
  const std::size_t n = blocks.size();
  if (n < 3) return Verdict::Inconclusive;
  double worst_ratio = 0;
  bool nondecreasing = true;
  for (std::size_t i = n - 3; i < n; ++i) {
    const double prev = blocks[i - 1], cur = blocks[i];
    if (prev <= 0) return cur <= 0 ? Verdict::Pass : Verdict::Inconclusive;
    worst_ratio = std::max(worst_ratio, cur / prev);
    if (cur < prev * (1 - 1e-12)) nondecreasing = false;
  }
  if (worst_ratio <= r_max) {
    tail = blocks[n - 1] * worst_ratio / (1 - worst_ratio);
    return Verdict::Pass;
  }
  if (nondecreasing) return Verdict::Fail;
  return Verdict::Inconclusive;
}

}  // namespace detail

/// Grothendieck-Pietsch test: for each candidate m, partial sums of
/// a_{sigma,k}/a_{sigma,m} over sup-norm boxes of growing radius; verdict
/// per the geometric shell heuristic; reports the first convergent m.
inline GPReport gp_test(const KoetheMatrix& A, int k, std::span<const int> m_candidates,
                        std::span<const int> radii, double r_max = 0.9) {
  if (radii.size() < 3) throw std::invalid_argument("gp_test: need >= 3 radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1]) throw std::invalid_argument("gp_test: radii must increase");
  GPReport rep;
  rep.k = k;
  for (int m : m_candidates) {
    auto scan = detail::scan_ratio_series(A, k, m, radii);
    double tail = 0;
    const Verdict v = detail::block_verdict(scan.block_sums, r_max, tail);
    rep.candidates.emplace_back(m, v);
    rep.partial_sums.clear();
    for (std::size_t i = 0; i < radii.size(); ++i)
      rep.partial_sums.emplace_back(radii[i], scan.partial[i]);
    rep.extrapolated_tail = tail;
    if (v == Verdict::Pass) {
      rep.m_found = m;
      rep.verdict = Verdict::Pass;
      return rep;
    }
    rep.verdict = v;
  }
  return rep;
}

/// c_0(A) membership diagnostic: per k, the weighted max over the
/// outermost index shell must decay >= 10x against the half-radius shell.
struct C0Entry {
  int k = 0;
  double outer_max = 0;
  double half_max = 0;
  bool pass = false;
};

inline std::vector<C0Entry> c0_membership(const CoefficientArray& c, const KoetheMatrix& A,
                                          std::span<const int> k_ladder) {
  const auto& lat = c.lattice();
  std::vector<C0Entry> table;
  for (int k : k_ladder) {
    C0Entry e;
    e.k = k;
    std::vector<int> idx(static_cast<std::size_t>(2 * lat.d));
    c.for_each([&](std::span<const int> kk, std::span<const int> nn, cplx z) {
      const int rk = sup_norm(kk), rn = sup_norm(nn);
      const bool outer = rk == lat.K || rn == lat.N;
      const bool half = (rk == lat.K / 2 && rn <= lat.N / 2) ||
                        (rn == lat.N / 2 && rk <= lat.K / 2);
      if (!outer && !half) return;
      for (int i = 0; i < lat.d; ++i) idx[static_cast<std::size_t>(i)] = kk[i];
      for (int i = 0; i < lat.d; ++i) idx[static_cast<std::size_t>(lat.d + i)] = nn[i];
      const double a = std::abs(z);
      const double v = a == 0 ? 0.0 : std::exp(std::log(a) + A.log_entry(idx, k));
      if (outer) e.outer_max = std::max(e.outer_max, v);
      if (half) e.half_max = std::max(e.half_max, v);
    });
    e.pass = e.outer_max <= 0.1 * e.half_max || (e.outer_max == 0);
    table.push_back(e);
  }
  return table;
}

/// Nuclearity verdict for the weight-generated matrix via condition
/// (gamma) and the sufficient margin m > k + 2d/b (lattice dimension 2d).
struct NuclearityReport {
  bool applicable = false;
  bool nuclear = false;
  double b = 0;
  std::vector<GPReport> gp;  // k = 1, 2, 3
};

inline NuclearityReport nuclearity_verdict_weight(const WeightFunction& w,
                                                  const LatticeSpec& lat,
                                                  std::span<const int> radii) {
  NuclearityReport rep;
  auto gamma = w.gamma_constants();
  if (!gamma || gamma->second <= 0) return rep;  // criterion inapplicable
  rep.applicable = true;
  rep.b = gamma->second;
  const auto A = koethe_from_weight(w, lat);
  rep.nuclear = true;
  for (int k = 1; k <= 3; ++k) {
    const int m = k + static_cast<int>(std::ceil(2.0 * lat.d / gamma->second)) + 1;
    const int mc[1] = {m};
    auto g = gp_test(A, k, mc, radii);
    if (g.verdict != Verdict::Pass) rep.nuclear = false;
    rep.gp.push_back(std::move(g));
  }
  return rep;
}

}  // namespace tfa

#endif  // TFA_KOETHE_HPP
