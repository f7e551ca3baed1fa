// Shared small utilities: grids, verdicts, hashing, multi-index iteration.

#ifndef TFA_COMMON_HPP
#define TFA_COMMON_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfa {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double inf = std::numeric_limits<double>::infinity();

/// Three-state outcome for limit/convergence checks that are only
/// decidable relative to a finite grid.
enum class Verdict { Pass, Fail, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    default: return "inconclusive";
  }
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

/// Log-spaced grid on [lo, hi], lo > 0.
inline std::vector<double> logspace(double lo, double hi, std::size_t n) {
  if (lo <= 0.0 || hi <= lo) throw std::invalid_argument("logspace: need 0 < lo < hi");
  std::vector<double> g(n);
  const double la = std::log(lo), lb = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(n - 1));
  return g;
}

/// Default evaluation grid for weight functions: t = 0 plus a log-spaced
/// sweep with 512 nodes per decade up to `cap`.
inline std::vector<double> weight_grid(double cap, double lo = 1e-3) {
  const double decades = std::log10(cap / lo);
  const std::size_t n = static_cast<std::size_t>(std::ceil(512.0 * decades)) + 1;
  std::vector<double> g;
  g.reserve(n + 1);
  g.push_back(0.0);
  auto tail = logspace(lo, cap, n);
  g.insert(g.end(), tail.begin(), tail.end());
  return g;
}

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// FNV-1a over raw bytes; used to fingerprint grids and configs.
inline std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 1469598103934665603ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t hash_doubles(std::span<const double> v) {
  return fnv1a(v.data(), v.size() * sizeof(double));
}

/// Iterates all integer vectors idx in [lo, hi]^len (inclusive).
inline void for_each_index(int lo, int hi, int len,
                           const std::function<void(std::span<const int>)>& fn) {
  std::vector<int> idx(static_cast<std::size_t>(len), lo);
  while (true) {
    fn(idx);
    int axis = len - 1;
    while (axis >= 0) {
      if (++idx[static_cast<std::size_t>(axis)] <= hi) break;
      idx[static_cast<std::size_t>(axis)] = lo;
      --axis;
    }
    if (axis < 0) return;
  }
}

inline int sup_norm(std::span<const int> idx) {
  int m = 0;
  for (int v : idx) m = std::max(m, std::abs(v));
  return m;
}

inline double euclid_norm(std::span<const int> idx) {
  double s = 0;
  for (int v : idx) s += static_cast<double>(v) * v;
  return std::sqrt(s);
}

/// Ordinary least squares y ~ a*x + b; returns {slope, intercept, r2}.
struct LineFit {
  double slope = 0, intercept = 0, r2 = 0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("fit_line: need >=2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  LineFit f;
  f.slope = (dn * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / dn;
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / dn;
  for (std::size_t i = 0; i < n; ++i) {
    const double pred = f.slope * x[i] + f.intercept;
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

}  // namespace tfa

#endif  // TFA_COMMON_HPP
