// STFT, Gabor analysis/synthesis on a lattice, frame operator, canonical
// dual window via conjugate gradient, roundtrip verification and
// coefficient decay profiling.

#ifndef TFA_GABOR_HPP
#define TFA_GABOR_HPP

#include <optional>
#include <random>

#include "tfa/grid.hpp"
#include "tfa/lattice.hpp"
#include "tfa/weights.hpp"

namespace tfa {

/// Gaussian window e^{-|x|^2} on the given grid.
inline SampledFunction gaussian_window(int d, double h, double R) {
  return SampledFunction::from_fn(d, h, R, [](std::span<const double> x) {
    double s = 0;
    for (double xi : x) s += xi * xi;
    return cplx{std::exp(-s), 0};
  });
}

struct GaborSystem {
  LatticeSpec lattice;
  SampledFunction window;  // phi_0, default Gaussian
  std::optional<SampledFunction> dual;
  std::optional<std::pair<double, double>> frame_bounds;  // (A_est, B_est)

  static GaborSystem with_gaussian(const LatticeSpec& lat, double h = 1.0 / 64, double R = 12) {
    return GaborSystem{lat, gaussian_window(lat.d, h, R), std::nullopt, std::nullopt};
  }
};

struct ShiftResult {
  SampledFunction value;
  bool nearest_node = false;
  bool truncation_warning = false;
};

/// Pi(z) f = M_xi T_x f, i.e. e^{i<y,xi>} f(y - x) on the same grid.
inline ShiftResult time_frequency_shift(const SampledFunction& f, std::span<const double> x,
                                        std::span<const double> xi) {
  const int d = f.d();
  ShiftResult res;
  res.value = SampledFunction(d, f.h(), f.R());
  std::vector<int> shift(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    const double s = x[a] / f.h();
    shift[static_cast<std::size_t>(a)] = static_cast<int>(std::llround(s));
    if (std::abs(s - shift[static_cast<std::size_t>(a)]) > 1e-9) res.nearest_node = true;
  }
  const int n = f.n_per_axis();
  double dropped = 0;
  std::vector<int> src(static_cast<std::size_t>(d));
  for_each_index(0, n - 1, d, [&](std::span<const int> j) {
    bool in_range = true;
    for (int a = 0; a < d; ++a) {
      src[static_cast<std::size_t>(a)] = j[a] - shift[static_cast<std::size_t>(a)];
      if (src[static_cast<std::size_t>(a)] < 0 || src[static_cast<std::size_t>(a)] >= n)
        in_range = false;
    }
    if (!in_range) return;
    double phase = 0;
    for (int a = 0; a < d; ++a) phase += f.coord(j[a]) * xi[a];
    res.value.values()[res.value.flat(j)] =
        f.values()[f.flat(src)] * std::polar(1.0, phase);
  });
  // mass pushed past the extent
  double total = 0;
  for (const auto& z : f.values()) total += std::norm(z);
  double kept = 0;
  for (const auto& z : res.value.values()) kept += std::norm(z);
  dropped = total - kept;
  res.truncation_warning = total > 0 && dropped > 1e-20 * total;
  return res;
}

/// V_phi f(x, xi) = int f(y) conj(phi(y-x)) e^{-i<y,xi>} dy by direct
/// Riemann quadrature at the requested phase-plane points.
inline std::vector<cplx> stft(const SampledFunction& f, const SampledFunction& phi,
                              std::span<const std::pair<std::vector<double>, std::vector<double>>>
                                  points) {
  if (f.size() != phi.size()) throw std::invalid_argument("stft: grid mismatch");
  const int d = f.d(), n = f.n_per_axis();
  const double cell = f.cell_volume();
  std::vector<cplx> out;
  out.reserve(points.size());
  std::vector<int> src(static_cast<std::size_t>(d));
  for (const auto& [x, xi] : points) {
    cplx acc{0, 0};
    for_each_index(0, n - 1, d, [&](std::span<const int> j) {
      const cplx fy = f.values()[f.flat(j)];
      if (fy == cplx{0, 0}) return;
      // phi(y - x) by nearest-node lookup (x is expected on grid nodes)
      bool in_range = true;
      double phase = 0;
      for (int a = 0; a < d; ++a) {
        const double y = f.coord(j[a]);
        const double s = (y - x[static_cast<std::size_t>(a)] + f.R()) / f.h();
        const int si = static_cast<int>(std::llround(s));
        if (si < 0 || si >= n) in_range = false;
        src[static_cast<std::size_t>(a)] = si;
        phase += y * xi[static_cast<std::size_t>(a)];
      }
      if (!in_range) return;
      acc += fy * std::conj(phi.values()[phi.flat(src)]) * std::polar(1.0, -phase);
    });
    out.push_back(acc * cell);
  }
  return out;
}

/// d = 1 convenience: V_phi f at a single (x, xi).
inline cplx stft_at(const SampledFunction& f, const SampledFunction& phi, double x, double xi) {
  std::pair<std::vector<double>, std::vector<double>> pt{{x}, {xi}};
  return stft(f, phi, std::span(&pt, 1))[0];
}

namespace detail {

/// Index range [lo, hi] outside which |w| <= tol * max|w| (1-d support clamp).
inline std::pair<int, int> support_range(const SampledFunction& w, double tol = 1e-18) {
  const int n = w.n_per_axis();
  const double cut = tol * w.max_abs();
  int lo = 0, hi = n - 1;
  while (lo < hi && std::abs(w.values()[static_cast<std::size_t>(lo)]) <= cut) ++lo;
  while (hi > lo && std::abs(w.values()[static_cast<std::size_t>(hi)]) <= cut) --hi;
  return {lo, hi};
}

}  // namespace detail

/// Analysis operator: c_{kn} = V_phi f(alpha0 k, beta0 n) on the truncated
/// lattice. Window shifts are cached per k-row.
inline CoefficientArray analysis(const SampledFunction& f, const GaborSystem& sys) {
  const auto& lat = sys.lattice;
  const auto& phi = sys.window;
  if (f.size() != phi.size()) throw std::invalid_argument("analysis: grid mismatch");
  const int d = f.d(), n = f.n_per_axis();
  const double cell = f.cell_volume();
  CoefficientArray c(lat);

  if (d == 1) {
    const auto [slo, shi] = detail::support_range(phi);
    const int N = lat.N, K = lat.K;
    const int ncoef = 2 * N + 1;
    std::vector<cplx> acc(static_cast<std::size_t>(ncoef));
    std::vector<cplx> step(static_cast<std::size_t>(n)), start(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double y = f.coord(j);
      step[static_cast<std::size_t>(j)] = std::polar(1.0, -y * lat.beta0);
      start[static_cast<std::size_t>(j)] = std::polar(1.0, y * lat.beta0 * N);
    }
    for (int k = -K; k <= K; ++k) {
      const int shift = static_cast<int>(std::llround(lat.alpha0 * k / f.h()));
      const int jlo = std::max(0, slo + shift), jhi = std::min(n - 1, shi + shift);
      std::fill(acc.begin(), acc.end(), cplx{0, 0});
      for (int j = jlo; j <= jhi; ++j) {
        const cplx w = f.values()[static_cast<std::size_t>(j)] *
                       std::conj(phi.values()[static_cast<std::size_t>(j - shift)]);
        if (w == cplx{0, 0}) continue;
        cplx ph = start[static_cast<std::size_t>(j)];
        const cplx st = step[static_cast<std::size_t>(j)];
        for (int m = 0; m < ncoef; ++m) {
          acc[static_cast<std::size_t>(m)] += w * ph;
          ph *= st;
        }
      }
      for (int m = 0; m < ncoef; ++m) c.at(k, m - N) = acc[static_cast<std::size_t>(m)] * cell;
    }
    return c;
  }

  std::vector<int> src(static_cast<std::size_t>(d));
  std::vector<cplx> windowed(f.size());
  std::vector<int> kv(static_cast<std::size_t>(d)), nv(static_cast<std::size_t>(d));
  for_each_index(-lat.K, lat.K, d, [&](std::span<const int> k) {
    std::copy(k.begin(), k.end(), kv.begin());
    // windowed[j] = f(y_j) conj(phi(y_j - alpha0 k)), zero where the shift
    // leaves the grid
    std::vector<int> shift(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a)
      shift[static_cast<std::size_t>(a)] =
          static_cast<int>(std::llround(lat.alpha0 * kv[static_cast<std::size_t>(a)] / f.h()));
    for_each_index(0, n - 1, d, [&](std::span<const int> j) {
      bool in_range = true;
      for (int a = 0; a < d; ++a) {
        src[static_cast<std::size_t>(a)] = j[a] - shift[static_cast<std::size_t>(a)];
        if (src[static_cast<std::size_t>(a)] < 0 || src[static_cast<std::size_t>(a)] >= n)
          in_range = false;
      }
      windowed[f.flat(j)] =
          in_range ? f.values()[f.flat(j)] * std::conj(phi.values()[phi.flat(src)]) : cplx{0, 0};
    });
    for_each_index(-lat.N, lat.N, d, [&](std::span<const int> nn) {
      std::copy(nn.begin(), nn.end(), nv.begin());
      cplx acc{0, 0};
      for_each_index(0, n - 1, d, [&](std::span<const int> j) {
        const cplx w = windowed[f.flat(j)];
        if (w == cplx{0, 0}) return;
        double phase = 0;
        for (int a = 0; a < d; ++a)
          phase += f.coord(j[a]) * lat.beta0 * nv[static_cast<std::size_t>(a)];
        acc += w * std::polar(1.0, -phase);
      });
      c.at(kv, nv) = acc * cell;
    });
  });
  return c;
}

/// Synthesis operator: D_psi c = sum_{k,n} c_{kn} e^{i<beta0 n, t>} psi(t - alpha0 k).
inline SampledFunction synthesis(const CoefficientArray& c, const SampledFunction& psi,
                                 const GaborSystem& sys) {
  const auto& lat = sys.lattice;
  const int d = psi.d(), n = psi.n_per_axis();
  SampledFunction out(d, psi.h(), psi.R());

  if (d == 1) {
    const auto [slo, shi] = detail::support_range(psi);
    const int N = lat.N, K = lat.K;
    const int ncoef = 2 * N + 1;
    std::vector<cplx> step(static_cast<std::size_t>(n)), start(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double y = psi.coord(j);
      step[static_cast<std::size_t>(j)] = std::polar(1.0, y * lat.beta0);
      start[static_cast<std::size_t>(j)] = std::polar(1.0, -y * lat.beta0 * N);
    }
    std::vector<cplx> coeffs(static_cast<std::size_t>(ncoef));
    for (int k = -K; k <= K; ++k) {
      const int shift = static_cast<int>(std::llround(lat.alpha0 * k / psi.h()));
      const int jlo = std::max(0, slo + shift), jhi = std::min(n - 1, shi + shift);
      if (jlo > jhi) continue;
      bool any = false;
      for (int m = 0; m < ncoef; ++m) {
        coeffs[static_cast<std::size_t>(m)] = c.at(k, m - N);
        if (coeffs[static_cast<std::size_t>(m)] != cplx{0, 0}) any = true;
      }
      if (!any) continue;
      for (int j = jlo; j <= jhi; ++j) {
        cplx row{0, 0};
        cplx ph = start[static_cast<std::size_t>(j)];
        const cplx st = step[static_cast<std::size_t>(j)];
        for (int m = 0; m < ncoef; ++m) {
          row += coeffs[static_cast<std::size_t>(m)] * ph;
          ph *= st;
        }
        out.values()[static_cast<std::size_t>(j)] +=
            row * psi.values()[static_cast<std::size_t>(j - shift)];
      }
    }
    return out;
  }

  std::vector<int> kv(static_cast<std::size_t>(d)), nv(static_cast<std::size_t>(d));
  std::vector<int> src(static_cast<std::size_t>(d));
  std::vector<cplx> row(psi.size());
  for_each_index(-lat.K, lat.K, d, [&](std::span<const int> k) {
    std::copy(k.begin(), k.end(), kv.begin());
    // row(t) = sum_n c_{kn} e^{i beta0 <n, t>}
    std::fill(row.begin(), row.end(), cplx{0, 0});
    for_each_index(-lat.N, lat.N, d, [&](std::span<const int> nn) {
      std::copy(nn.begin(), nn.end(), nv.begin());
      const cplx coeff = c.at(kv, nv);
      if (coeff == cplx{0, 0}) return;
      for_each_index(0, n - 1, d, [&](std::span<const int> j) {
        double phase = 0;
        for (int a = 0; a < d; ++a)
          phase += psi.coord(j[a]) * lat.beta0 * nv[static_cast<std::size_t>(a)];
        row[psi.flat(j)] += coeff * std::polar(1.0, phase);
      });
    });
    std::vector<int> shift(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a)
      shift[static_cast<std::size_t>(a)] =
          static_cast<int>(std::llround(lat.alpha0 * kv[static_cast<std::size_t>(a)] / psi.h()));
    for_each_index(0, n - 1, d, [&](std::span<const int> j) {
      bool in_range = true;
      for (int a = 0; a < d; ++a) {
        src[static_cast<std::size_t>(a)] = j[a] - shift[static_cast<std::size_t>(a)];
        if (src[static_cast<std::size_t>(a)] < 0 || src[static_cast<std::size_t>(a)] >= n)
          in_range = false;
      }
      if (!in_range) return;
      out.values()[out.flat(j)] += row[out.flat(j)] * psi.values()[psi.flat(src)];
    });
  });
  return out;
}

/// Frame operator S f = sum_sigma <f, Pi(sigma) phi> Pi(sigma) phi.
inline SampledFunction frame_operator_apply(const SampledFunction& f, const GaborSystem& sys) {
  if (sys.lattice.alpha0 <= 0 || sys.lattice.beta0 <= 0)
    throw std::invalid_argument("frame_operator_apply: alpha0, beta0 must be > 0");
  return synthesis(analysis(f, sys), sys.window, sys);
}

namespace detail {

inline void axpy(SampledFunction& y, double a, const SampledFunction& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y.values()[i] += a * x.values()[i];
}

inline double rayleigh(const SampledFunction& f, const GaborSystem& sys) {
  const SampledFunction sf = frame_operator_apply(f, sys);
  const double n2 = std::pow(f.norm2(), 2);
  return n2 > 0 ? inner_product(sf, f).real() / n2 : 0.0;
}

/// Seeded trial set: Hermite-flavoured polynomials times Gaussians plus
/// random Gaussian mixtures, all concentrated near the origin.
inline std::vector<SampledFunction> trial_functions(const GaborSystem& sys, int trials,
                                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> center(-3.0, 3.0), width(0.5, 2.0), amp(-1.0, 1.0);
  const auto& w = sys.window;
  std::vector<SampledFunction> set;
  for (int q = 0; q < std::min(trials, 8); ++q) {
    // x^q e^{-x^2/2}-type bump (normalized later through the quotient)
    set.push_back(SampledFunction::from_fn(w.d(), w.h(), w.R(), [&](std::span<const double> x) {
      double s = 0, p = 1;
      for (double xi : x) {
        s += xi * xi;
        p *= std::pow(xi, q % 4);
      }
      return cplx{p * std::exp(-s / 2), 0};
    }));
  }
  while (static_cast<int>(set.size()) < trials) {
    std::vector<double> cs, ws;
    std::vector<cplx> as;
    for (int g = 0; g < 3; ++g) {
      cs.push_back(center(rng));
      ws.push_back(width(rng));
      as.push_back(cplx{amp(rng), amp(rng)});
    }
    set.push_back(SampledFunction::from_fn(w.d(), w.h(), w.R(), [&](std::span<const double> x) {
      cplx v{0, 0};
      for (int g = 0; g < 3; ++g) {
        double s = 0;
        for (double xi : x) s += (xi - cs[static_cast<std::size_t>(g)]) *
                                 (xi - cs[static_cast<std::size_t>(g)]);
        v += as[static_cast<std::size_t>(g)] *
             std::exp(-s / (2 * ws[static_cast<std::size_t>(g)] * ws[static_cast<std::size_t>(g)]));
      }
      return v;
    }));
  }
  return set;
}

/// Restriction to a core box |x|_inf <= Rcore; keeps the bound search away
/// from grid-boundary artifacts where the truncated lattice has no windows.
inline void project_core(SampledFunction& f, double Rcore) {
  const int d = f.d(), n = f.n_per_axis();
  for_each_index(0, n - 1, d, [&](std::span<const int> j) {
    for (int a = 0; a < d; ++a)
      if (std::abs(f.coord(j[a])) > Rcore) {
        f.values()[f.flat(j)] = cplx{0, 0};
        return;
      }
  });
}

struct CgResult {
  SampledFunction x;
  double rel_residual = inf;
  int iterations = 0;
  bool converged = false;
};

/// Conjugate gradient on the grid-discretized frame operator (positive
/// definite for a frame).
inline CgResult conjugate_gradient(const GaborSystem& sys, const SampledFunction& b,
                                   double rel_tol, int max_iter,
                                   const SampledFunction* x0 = nullptr) {
  const auto apply = [&](const SampledFunction& v) { return frame_operator_apply(v, sys); };
  CgResult res;
  res.x = x0 ? *x0 : SampledFunction(b.d(), b.h(), b.R());
  SampledFunction r = b;
  if (x0) {
    SampledFunction sx = apply(res.x);
    for (std::size_t i = 0; i < r.size(); ++i) r.values()[i] -= sx.values()[i];
  }
  const double b_norm = b.norm2();
  if (b_norm == 0) {
    res.rel_residual = 0;
    res.converged = true;
    return res;
  }
  SampledFunction p = r;
  double rs = std::pow(r.norm2(), 2);
  for (int it = 0; it < max_iter; ++it) {
    const SampledFunction q = apply(p);
    const double pq = inner_product(q, p).real();
    if (pq <= 0) break;  // loss of positive definiteness within roundoff
    const double alpha = rs / pq;
    for (std::size_t i = 0; i < res.x.size(); ++i) res.x.values()[i] += alpha * p.values()[i];
    for (std::size_t i = 0; i < r.size(); ++i) r.values()[i] -= alpha * q.values()[i];
    const double rs_new = std::pow(r.norm2(), 2);
    res.iterations = it + 1;
    res.rel_residual = std::sqrt(rs_new) / b_norm;
    if (res.rel_residual <= rel_tol) {
      res.converged = true;
      return res;
    }
    const double beta = rs_new / rs;
    rs = rs_new;
    for (std::size_t i = 0; i < p.size(); ++i)
      p.values()[i] = r.values()[i] + beta * p.values()[i];
  }
  // recompute the true residual (accumulated recurrences drift)
  SampledFunction sx = apply(res.x);
  for (std::size_t i = 0; i < sx.size(); ++i) sx.values()[i] -= b.values()[i];
  res.rel_residual = sx.norm2() / b_norm;
  res.converged = res.rel_residual <= rel_tol;
  return res;
}

}  // namespace detail

struct FrameBoundsOptions {
  int trials = 20;
  int refine_rounds = 20;
  std::uint64_t seed = 42;
  double core_radius = 6.0;
  double inverse_cg_tol = 1e-6;
  int inverse_cg_max_iter = 150;
};

struct FrameBoundsResult {
  double A_est = 0;
  double B_est = 0;
  bool frame_failure_suspected = false;  // A_est < 1e-8
};

/// Rayleigh-quotient frame-bound estimates over a seeded trial set,
/// refined by power iteration (B) and CG-based inverse iteration (A).
inline FrameBoundsResult frame_bounds(GaborSystem& sys, const FrameBoundsOptions& opt = {}) {
  if (opt.trials < 10) throw std::invalid_argument("frame_bounds: trials >= 10 required");
  auto set = detail::trial_functions(sys, opt.trials, opt.seed);
  double A = inf, B = 0;
  std::size_t a_idx = 0, b_idx = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double q = detail::rayleigh(set[i], sys);
    if (q < A) {
      A = q;
      a_idx = i;
    }
    if (q > B) {
      B = q;
      b_idx = i;
    }
  }
  // power iteration from the max-quotient trial
  SampledFunction v = set[b_idx];
  for (int round = 0; round < opt.refine_rounds; ++round) {
    SampledFunction sv = frame_operator_apply(v, sys);
    const double nn = sv.norm2();
    if (nn == 0) break;
    for (auto& z : sv.values()) z /= nn;
    v = std::move(sv);
  }
  B = std::max(B, detail::rayleigh(v, sys));

  // inverse iteration from the min-quotient trial, projected onto the core
  SampledFunction u = set[a_idx];
  detail::project_core(u, opt.core_radius);
  for (int round = 0; round < opt.refine_rounds; ++round) {
    auto sol = detail::conjugate_gradient(sys, u, opt.inverse_cg_tol, opt.inverse_cg_max_iter);
    detail::project_core(sol.x, opt.core_radius);
    const double nn = sol.x.norm2();
    if (nn == 0) break;
    for (auto& z : sol.x.values()) z /= nn;
    u = std::move(sol.x);
  }
  A = std::min(A, detail::rayleigh(u, sys));

  FrameBoundsResult res{A, B, A < 1e-8};
  sys.frame_bounds = {A, B};
  return res;
}

struct CanonicalDualResult {
  SampledFunction dual;
  double rel_residual = inf;
  int iterations = 0;
  bool converged = false;
};

/// Canonical dual window psi_0 = S^{-1} phi_0 via the frame algorithm
/// (relaxed Richardson iteration psi <- psi + tau (phi - S psi)).
///
/// CG is deliberately avoided here: the modulation-truncated S carries a
/// numerically tiny tail of eigenvalues on band-edge modes |xi| ~ beta0 N,
/// and CG inverts them, polluting the dual with O(1) components that the
/// residual check cannot see (their image under S is below the tolerance).
/// Richardson never amplifies those directions, while on smooth inputs S
/// acts like multiplication by its Walnut symbol, whose range is narrow for
/// a well-localized window, so the bulk error contracts quickly.
inline CanonicalDualResult canonical_dual(GaborSystem& sys, double cg_tol = 1e-9) {
  const int max_iter = 2000;
  const SampledFunction& phi = sys.window;
  const double phi_norm = phi.norm2();
  if (phi_norm == 0) throw std::invalid_argument("canonical_dual: zero window");

  // relaxation from the pointwise symbol estimate Re(S phi / phi) where phi
  // is not negligible; fall back to the Rayleigh quotient if that degenerates
  SampledFunction sphi = frame_operator_apply(phi, sys);
  double amax = 0;
  for (std::size_t i = 0; i < phi.size(); ++i) amax = std::max(amax, std::abs(phi.values()[i]));
  double lo = inf, hi = 0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double m2 = std::norm(phi.values()[i]);
    if (std::sqrt(m2) < 1e-3 * amax) continue;
    const double q = (sphi.values()[i] * std::conj(phi.values()[i])).real() / m2;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  if (!(lo > 0) || !(hi >= lo)) lo = hi = detail::rayleigh(phi, sys);
  if (!(hi > 0)) throw std::runtime_error("canonical_dual: frame operator not positive on window");
  const double tau = 2.0 / (lo + hi);

  CanonicalDualResult res;
  res.dual = SampledFunction(phi.d(), phi.h(), phi.R());
  SampledFunction r = phi;
  for (int it = 0; it < max_iter; ++it) {
    detail::axpy(res.dual, tau, r);
    SampledFunction sr = frame_operator_apply(r, sys);
    detail::axpy(r, -tau, sr);
    res.iterations = it + 1;
    res.rel_residual = r.norm2() / phi_norm;
    if (res.rel_residual <= 0.5 * cg_tol) break;
  }
  // recompute the true residual (the recurrence drifts over many steps)
  {
    SampledFunction sx = frame_operator_apply(res.dual, sys);
    double diff = 0;
    for (std::size_t i = 0; i < sx.size(); ++i)
      diff += std::norm(sx.values()[i] - phi.values()[i]);
    res.rel_residual = std::sqrt(diff * sx.cell_volume()) / phi_norm;
  }
  res.converged = res.rel_residual <= cg_tol;
  if (!res.converged)
    throw std::runtime_error("canonical_dual: frame iteration stagnation, residual " +
                             std::to_string(res.rel_residual));
  sys.dual = res.dual;
  return res;
}

struct RoundtripResult {
  double rel_error = 0;
  CoefficientArray coefficients;
};

/// rel_error of D_{psi0} C_{phi0} f against f in L^2.
inline RoundtripResult roundtrip(const SampledFunction& f, const GaborSystem& sys) {
  if (!sys.dual) throw std::invalid_argument("roundtrip: canonical dual not computed");
  RoundtripResult res;
  res.coefficients = analysis(f, sys);
  SampledFunction rec = synthesis(res.coefficients, *sys.dual, sys);
  const double fn = f.norm2();
  if (fn == 0) {
    res.rel_error = rec.norm2() == 0 ? 0.0 : inf;
    return res;
  }
  double diff = 0;
  for (std::size_t i = 0; i < rec.size(); ++i)
    diff += std::norm(rec.values()[i] - f.values()[i]);
  res.rel_error = std::sqrt(diff * rec.cell_volume()) / fn;
  return res;
}

struct DecayLadderEntry {
  double lambda = 0;
  double sup_full = 0;   // sup over the full truncation box
  double sup_half = 0;   // sup over the half truncation box
  bool divergent = false;  // sup grew > 10% from half to full truncation
};

struct DecayProfile {
  std::vector<DecayLadderEntry> ladder;
  LineFit fit_omega;    // log|c| per shell max vs omega(|sigma|)
  LineFit fit_gauss;    // log|c| per shell max vs |sigma|^2
};

/// Weighted sup ladder sup_sigma |c_sigma| e^{lambda omega(|sigma|)} plus
/// least-squares decay fits of the per-shell coefficient maxima.
inline DecayProfile decay_profile(const CoefficientArray& c, const WeightFunction& w,
                                  std::span<const double> lambda_ladder) {
  const auto& lat = c.lattice();
  DecayProfile prof;
  for (double lam : lambda_ladder) {
    DecayLadderEntry e;
    e.lambda = lam;
    c.for_each([&](std::span<const int> k, std::span<const int> n, cplx z) {
      const double snorm = lat.sigma_norm(k, n);
      const double v = std::abs(z) * std::exp(lam * w(std::min(snorm, w.domain_cap())));
      e.sup_full = std::max(e.sup_full, v);
      if (sup_norm(k) <= lat.K / 2 && sup_norm(n) <= lat.N / 2)
        e.sup_half = std::max(e.sup_half, v);
    });
    e.divergent = e.sup_half > 0 && e.sup_full > 1.10 * e.sup_half;
    prof.ladder.push_back(e);
  }

  // per-shell maxima (sup-norm shells over the combined index), ignoring
  // coefficients at the numerical noise floor
  const int rmax = std::max(lat.K, lat.N);
  std::vector<double> shell_max(static_cast<std::size_t>(rmax) + 1, 0.0);
  std::vector<double> shell_norm(static_cast<std::size_t>(rmax) + 1, 0.0);
  c.for_each([&](std::span<const int> k, std::span<const int> n, cplx z) {
    const int r = std::max(sup_norm(k), sup_norm(n));
    const double a = std::abs(z);
    if (a > shell_max[static_cast<std::size_t>(r)]) {
      shell_max[static_cast<std::size_t>(r)] = a;
      shell_norm[static_cast<std::size_t>(r)] = lat.sigma_norm(k, n);
    }
  });
  const double peak = c.max_abs();
  std::vector<double> xs_omega, xs_gauss, ys;
  for (int r = 0; r <= rmax; ++r) {
    const double a = shell_max[static_cast<std::size_t>(r)];
    if (a <= 0 || a < 1e-13 * peak) continue;
    const double sn = shell_norm[static_cast<std::size_t>(r)];
    xs_omega.push_back(w(std::min(sn, w.domain_cap())));
    xs_gauss.push_back(sn * sn);
    ys.push_back(std::log(a));
  }
  if (ys.size() >= 3) {
    prof.fit_omega = fit_line(xs_omega, ys);
    prof.fit_gauss = fit_line(xs_gauss, ys);
  }
  return prof;
}

}  // namespace tfa

#endif  // TFA_GABOR_HPP
