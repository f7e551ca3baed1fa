// Uniformly sampled functions, the Fourier transform convention
// FT(u)(xi) = int u(x) e^{-i<x,xi>} dx, weighted mixed norms, amalgam
// norms, FFT convolution and the empirical inequality verifiers.

#ifndef TFA_GRID_HPP
#define TFA_GRID_HPP

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tfa/common.hpp"
#include "tfa/fft.hpp"
#include "tfa/lattice.hpp"
#include "tfa/weights.hpp"

namespace tfa {

/// Complex samples of a function on the uniform grid [-R, R)^d with
/// spacing h; 2R/h must be an even integer (FFTW handles arbitrary sizes,
/// and the centering phase needs n/2 integral).
class SampledFunction {
 public:
  SampledFunction() = default;
  SampledFunction(int d, double h, double R) : d_(d), h_(h), R_(R) {
    const double nd = 2 * R / h;
    n_ = static_cast<int>(std::llround(nd));
    if (std::abs(nd - n_) > 1e-9 || n_ <= 0 || n_ % 2 != 0)
      throw std::invalid_argument("SampledFunction: 2R/h must be an even integer");
    std::size_t total = 1;
    for (int a = 0; a < d; ++a) total *= static_cast<std::size_t>(n_);
    v_.assign(total, cplx{0, 0});
  }

  template <typename Fn>
  static SampledFunction from_fn(int d, double h, double R, Fn&& fn) {
    SampledFunction f(d, h, R);
    std::vector<double> x(static_cast<std::size_t>(d));
    for_each_index(0, f.n_ - 1, d, [&](std::span<const int> j) {
      for (int a = 0; a < d; ++a) x[static_cast<std::size_t>(a)] = f.coord(j[a]);
      f.v_[f.flat(j)] = fn(std::span<const double>(x));
    });
    return f;
  }

  int d() const { return d_; }
  double h() const { return h_; }
  double R() const { return R_; }
  int n_per_axis() const { return n_; }
  std::size_t size() const { return v_.size(); }
  std::vector<cplx>& values() { return v_; }
  const std::vector<cplx>& values() const { return v_; }

  double coord(int j) const { return -R_ + j * h_; }

  std::size_t flat(std::span<const int> j) const {
    std::size_t idx = 0;
    for (int a = 0; a < d_; ++a)
      idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j[a]);
    return idx;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& z : v_) m = std::max(m, std::abs(z));
    return m;
  }

  /// |values| on the outermost grid shell below 1e-10 times the peak.
  bool truncation_adequate(double tol = 1e-10) const {
    const double peak = max_abs();
    if (peak == 0) return true;
    double boundary = 0;
    for_each_index(0, n_ - 1, d_, [&](std::span<const int> j) {
      bool on_shell = false;
      for (int a = 0; a < d_; ++a)
        if (j[a] == 0 || j[a] == n_ - 1) on_shell = true;
      if (on_shell) boundary = std::max(boundary, std::abs(v_[flat(j)]));
    });
    return boundary <= tol * peak;
  }

  double cell_volume() const { return std::pow(h_, d_); }

  double norm2() const {
    double s = 0;
    for (const auto& z : v_) s += std::norm(z);
    return std::sqrt(s * cell_volume());
  }

 private:
  int d_ = 1;
  double h_ = 1.0, R_ = 1.0;
  int n_ = 2;
  std::vector<cplx> v_;
};

inline cplx inner_product(const SampledFunction& f, const SampledFunction& g) {
  if (f.size() != g.size()) throw std::invalid_argument("inner_product: grid mismatch");
  cplx s{0, 0};
  const auto& a = f.values();
  const auto& b = g.values();
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s * f.cell_volume();
}

namespace detail {

// Grid DFT with the paper's convention via pre/post (-1)^j twiddles:
//   u_hat(xi_m) = h^d e^{-i pi N/2 * d} prod(-1)^{m_a} DFT[prod(-1)^{j_a} u_j].
inline SampledFunction transform_impl(const SampledFunction& f, int sign) {
  const int d = f.d(), n = f.n_per_axis();
  const double h_out = pi / f.R();
  const double R_out = pi / f.h();
  SampledFunction out(d, h_out, R_out);
  std::vector<cplx> buf = f.values();
  for_each_index(0, n - 1, d, [&](std::span<const int> j) {
    int par = 0;
    for (int a = 0; a < d; ++a) par += j[a];
    if (par & 1) buf[f.flat(j)] = -buf[f.flat(j)];
  });
  std::vector<int> shape(static_cast<std::size_t>(d), n);
  dft_inplace(buf, shape, sign);
  // per-axis constant phase: e^{-i pi N/2} forward, e^{+i pi N/2} backward
  const double ang = sign * pi * static_cast<double>(n) / 2.0 * d;
  const cplx phase = std::polar(1.0, ang);
  double scale = (sign == -1) ? f.cell_volume() : f.cell_volume() / std::pow(2 * pi, d);
  for_each_index(0, n - 1, d, [&](std::span<const int> m) {
    int par = 0;
    for (int a = 0; a < d; ++a) par += m[a];
    cplx val = buf[f.flat(m)] * phase * scale;
    if (par & 1) val = -val;
    out.values()[out.flat(m)] = val;
  });
  return out;
}

}  // namespace detail

struct TransformResult {
  SampledFunction value;
  bool truncation_warning = false;
};

/// u_hat on the dual grid (spacing pi/R, extent pi/h).
inline TransformResult fourier_transform(const SampledFunction& f) {
  TransformResult r{detail::transform_impl(f, -1), !f.truncation_adequate()};
  return r;
}

/// Inverse of fourier_transform, including the (2 pi)^{-d} factor.
inline TransformResult inverse_fourier_transform(const SampledFunction& fhat) {
  TransformResult r{detail::transform_impl(fhat, +1), !fhat.truncation_adequate()};
  return r;
}

/// Complex samples on the product grid [-Rx, Rx)^d x [-Rxi, Rxi)^d.
/// Layout is xi-major: for fixed xi the x block is contiguous.
class PhasePlaneFunction {
 public:
  PhasePlaneFunction() = default;
  PhasePlaneFunction(int d, double hx, double Rx, double hxi, double Rxi)
      : d_(d), hx_(hx), Rx_(Rx), hxi_(hxi), Rxi_(Rxi) {
    nx_ = axis_count(hx, Rx);
    nxi_ = axis_count(hxi, Rxi);
    std::size_t total = 1;
    for (int a = 0; a < d; ++a) total *= static_cast<std::size_t>(nxi_);
    for (int a = 0; a < d; ++a) total *= static_cast<std::size_t>(nx_);
    v_.assign(total, cplx{0, 0});
  }

  template <typename Fn>
  static PhasePlaneFunction from_fn(int d, double hx, double Rx, double hxi, double Rxi,
                                    Fn&& fn) {
    PhasePlaneFunction F(d, hx, Rx, hxi, Rxi);
    std::vector<double> x(static_cast<std::size_t>(d)), xi(static_cast<std::size_t>(d));
    for_each_index(0, F.nxi_ - 1, d, [&](std::span<const int> mj) {
      for (int a = 0; a < d; ++a) xi[static_cast<std::size_t>(a)] = F.xi_coord(mj[a]);
      for_each_index(0, F.nx_ - 1, d, [&](std::span<const int> jj) {
        for (int a = 0; a < d; ++a) x[static_cast<std::size_t>(a)] = F.x_coord(jj[a]);
        F.v_[F.flat(jj, mj)] = fn(std::span<const double>(x), std::span<const double>(xi));
      });
    });
    return F;
  }

  int d() const { return d_; }
  double hx() const { return hx_; }
  double Rx() const { return Rx_; }
  double hxi() const { return hxi_; }
  double Rxi() const { return Rxi_; }
  int nx() const { return nx_; }
  int nxi() const { return nxi_; }
  std::vector<cplx>& values() { return v_; }
  const std::vector<cplx>& values() const { return v_; }

  double x_coord(int j) const { return -Rx_ + j * hx_; }
  double xi_coord(int m) const { return -Rxi_ + m * hxi_; }

  std::size_t flat(std::span<const int> jx, std::span<const int> jxi) const {
    std::size_t idx = 0;
    for (int a = 0; a < d_; ++a)
      idx = idx * static_cast<std::size_t>(nxi_) + static_cast<std::size_t>(jxi[a]);
    for (int a = 0; a < d_; ++a)
      idx = idx * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(jx[a]);
    return idx;
  }

  double cell_volume() const { return std::pow(hx_ * hxi_, d_); }

  double max_abs() const {
    double m = 0;
    for (const auto& z : v_) m = std::max(m, std::abs(z));
    return m;
  }

  bool truncation_adequate(double tol = 1e-10) const {
    const double peak = max_abs();
    if (peak == 0) return true;
    double boundary = 0;
    for_each_index(0, nxi_ - 1, d_, [&](std::span<const int> mj) {
      bool xi_shell = false;
      for (int a = 0; a < d_; ++a)
        if (mj[a] == 0 || mj[a] == nxi_ - 1) xi_shell = true;
      for_each_index(0, nx_ - 1, d_, [&](std::span<const int> jj) {
        bool shell = xi_shell;
        for (int a = 0; a < d_; ++a)
          if (jj[a] == 0 || jj[a] == nx_ - 1) shell = true;
        if (shell) boundary = std::max(boundary, std::abs(v_[flat(jj, mj)]));
      });
    });
    return boundary <= tol * peak;
  }

  bool same_grid(const PhasePlaneFunction& o) const {
    return d_ == o.d_ && hx_ == o.hx_ && Rx_ == o.Rx_ && hxi_ == o.hxi_ && Rxi_ == o.Rxi_;
  }

 private:
  static int axis_count(double h, double R) {
    const double nd = 2 * R / h;
    const int n = static_cast<int>(std::llround(nd));
    if (std::abs(nd - n) > 1e-9 || n < 2)
      throw std::invalid_argument("PhasePlaneFunction: 2R/h must be a positive integer");
    return n;
  }

  int d_ = 1;
  double hx_ = 1, Rx_ = 1, hxi_ = 1, Rxi_ = 1;
  int nx_ = 2, nxi_ = 2;
  std::vector<cplx> v_;
};

/// Parameters of the weighted mixed norm L^{p,q}_{m_lambda}; p, q in
/// {1, 2, inf} are the test-covered values, other p, q >= 1 are accepted.
struct MixedNormSpec {
  double p = 2;
  double q = 2;
  double lambda = 0;
  WeightFunction weight = WeightFunction::log_power(1.0);

  double m(double znorm) const {
    if (lambda == 0) return 1.0;
    return std::exp(lambda * weight(std::min(znorm, weight.domain_cap())));
  }
};

namespace detail {

inline double lp_reduce(std::span<const double> terms, double p, double cell) {
  if (std::isinf(p)) {
    double m = 0;
    for (double t : terms) m = std::max(m, t);
    return m;
  }
  double s = 0;
  for (double t : terms) s += std::pow(t, p);
  return std::pow(s * cell, 1.0 / p);
}

}  // namespace detail

/// Riemann-sum evaluation of the iterated norm: inner p-norm in x with the
/// weight m_lambda, outer q-norm in xi. ess-sup is rendered as grid max.
/// Returns +inf when the weighted integrand overflows.
inline double mixed_norm(const PhasePlaneFunction& F, const MixedNormSpec& spec) {
  const int d = F.d();
  const double cx = std::pow(F.hx(), d), cxi = std::pow(F.hxi(), d);
  std::vector<double> outer;
  std::vector<double> inner;
  std::vector<double> xi(static_cast<std::size_t>(d)), x(static_cast<std::size_t>(d));
  bool overflow = false;
  for_each_index(0, F.nxi() - 1, d, [&](std::span<const int> mj) {
    for (int a = 0; a < d; ++a) xi[static_cast<std::size_t>(a)] = F.xi_coord(mj[a]);
    inner.clear();
    for_each_index(0, F.nx() - 1, d, [&](std::span<const int> jj) {
      double z2 = 0;
      for (int a = 0; a < d; ++a) {
        x[static_cast<std::size_t>(a)] = F.x_coord(jj[a]);
        z2 += x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
        z2 += xi[static_cast<std::size_t>(a)] * xi[static_cast<std::size_t>(a)];
      }
      const double w = spec.m(std::sqrt(z2));
      const double t = std::abs(F.values()[F.flat(jj, mj)]) * w;
      if (!std::isfinite(t)) overflow = true;
      inner.push_back(t);
    });
    outer.push_back(detail::lp_reduce(inner, spec.p, cx));
  });
  if (overflow) return inf;
  const double r = detail::lp_reduce(outer, spec.q, cxi);
  return std::isfinite(r) ? r : inf;
}

/// Cube maxima a_{kn} = max |F| over (k,n) + [0,1)^{2d}, followed by the
/// weighted little-lpq sequence norm with m_lambda(k,n). The grid spacing
/// must divide 1 and the extents must be integers.
inline double amalgam_norm(const PhasePlaneFunction& F, const MixedNormSpec& spec) {
  const int d = F.d();
  const double inv_hx = 1.0 / F.hx(), inv_hxi = 1.0 / F.hxi();
  const int px = static_cast<int>(std::llround(inv_hx));
  const int pxi = static_cast<int>(std::llround(inv_hxi));
  if (std::abs(inv_hx - px) > 1e-9 || std::abs(inv_hxi - pxi) > 1e-9)
    throw std::invalid_argument("amalgam_norm: h must divide 1");
  const int Kx = static_cast<int>(std::llround(F.Rx()));
  const int Kxi = static_cast<int>(std::llround(F.Rxi()));
  if (std::abs(F.Rx() - Kx) > 1e-9 || std::abs(F.Rxi() - Kxi) > 1e-9)
    throw std::invalid_argument("amalgam_norm: extents must be integer-aligned");

  // cube max for cube index c (per axis, cube c covers [c, c+1))
  auto cube_max = [&](std::span<const int> kc, std::span<const int> nc) {
    double m = 0;
    std::vector<int> jx(static_cast<std::size_t>(d)), jxi(static_cast<std::size_t>(d));
    std::function<void(int)> rec_x;
    std::function<void(int)> rec_xi = [&](int axis) {
      if (axis == d) {
        rec_x(0);
        return;
      }
      const int base = (nc[axis] + Kxi) * pxi;
      for (int t = 0; t < pxi; ++t) {
        jxi[static_cast<std::size_t>(axis)] = base + t;
        rec_xi(axis + 1);
      }
    };
    rec_x = [&](int axis) {
      if (axis == d) {
        m = std::max(m, std::abs(F.values()[F.flat(jx, jxi)]));
        return;
      }
      const int base = (kc[axis] + Kx) * px;
      for (int t = 0; t < px; ++t) {
        jx[static_cast<std::size_t>(axis)] = base + t;
        rec_x(axis + 1);
      }
    };
    rec_xi(0);
    return m;
  };

  std::vector<double> outer, inner;
  bool overflow = false;
  for_each_index(-Kxi, Kxi - 1, d, [&](std::span<const int> nc) {
    inner.clear();
    std::vector<int> ncv(nc.begin(), nc.end());
    for_each_index(-Kx, Kx - 1, d, [&](std::span<const int> kc) {
      std::vector<int> all(kc.begin(), kc.end());
      all.insert(all.end(), ncv.begin(), ncv.end());
      const double w = spec.m(euclid_norm(all));
      const double t = cube_max(kc, ncv) * w;
      if (!std::isfinite(t)) overflow = true;
      inner.push_back(t);
    });
    outer.push_back(detail::lp_reduce(inner, spec.p, 1.0));
  });
  if (overflow) return inf;
  const double r = detail::lp_reduce(outer, spec.q, 1.0);
  return std::isfinite(r) ? r : inf;
}

/// Linear convolution via zero-padded FFT, Riemann-scaled by (hx*hxi)^d,
/// restricted back to the common grid.
inline PhasePlaneFunction convolve(const PhasePlaneFunction& F, const PhasePlaneFunction& G) {
  if (!F.same_grid(G)) throw std::invalid_argument("convolve: grid mismatch");
  const int d = F.d();
  const int nx = F.nx(), nxi = F.nxi();
  std::vector<int> shape;
  for (int a = 0; a < d; ++a) shape.push_back(2 * nxi);
  for (int a = 0; a < d; ++a) shape.push_back(2 * nx);
  std::size_t total = 1;
  for (int s : shape) total *= static_cast<std::size_t>(s);

  auto pad = [&](const PhasePlaneFunction& H) {
    std::vector<cplx> out(total, cplx{0, 0});
    std::vector<int> mj(static_cast<std::size_t>(d)), jj(static_cast<std::size_t>(d));
    for_each_index(0, nxi - 1, d, [&](std::span<const int> m) {
      std::copy(m.begin(), m.end(), mj.begin());
      for_each_index(0, nx - 1, d, [&](std::span<const int> j) {
        std::copy(j.begin(), j.end(), jj.begin());
        std::size_t idx = 0;
        for (int a = 0; a < d; ++a)
          idx = idx * static_cast<std::size_t>(2 * nxi) + static_cast<std::size_t>(mj[a]);
        for (int a = 0; a < d; ++a)
          idx = idx * static_cast<std::size_t>(2 * nx) + static_cast<std::size_t>(jj[a]);
        out[idx] = H.values()[H.flat(jj, mj)];
      });
    });
    return out;
  };

  std::vector<cplx> A = pad(F), B = pad(G);
  dft_inplace(A, shape, -1);
  dft_inplace(B, shape, -1);
  for (std::size_t i = 0; i < total; ++i) A[i] *= B[i];
  dft_inplace(A, shape, +1);
  const double scale = F.cell_volume() / static_cast<double>(total);

  PhasePlaneFunction out(d, F.hx(), F.Rx(), F.hxi(), F.Rxi());
  std::vector<int> mj(static_cast<std::size_t>(d)), jj(static_cast<std::size_t>(d));
  for_each_index(0, nxi - 1, d, [&](std::span<const int> m) {
    std::copy(m.begin(), m.end(), mj.begin());
    for_each_index(0, nx - 1, d, [&](std::span<const int> j) {
      std::copy(j.begin(), j.end(), jj.begin());
      std::size_t idx = 0;
      for (int a = 0; a < d; ++a)
        idx = idx * static_cast<std::size_t>(2 * nxi) +
              static_cast<std::size_t>(mj[a] + nxi / 2);
      for (int a = 0; a < d; ++a)
        idx = idx * static_cast<std::size_t>(2 * nx) + static_cast<std::size_t>(jj[a] + nx / 2);
      out.values()[out.flat(jj, mj)] = A[idx] * scale;
    });
  });
  return out;
}

/// Outcome of an empirical inequality check: both sides plus the fitted
/// constant lhs / rhs_product.
struct InequalityReport {
  double lhs = 0;
  double rhs_f = 0;
  double rhs_g = 0;
  double constant = 0;
  bool pass = false;
};

/// Prop-2.6 style weighted Young verification with mu(lambda), nu(lambda)
/// from the certified doubling constant L.
inline InequalityReport verify_young(const PhasePlaneFunction& F, const PhasePlaneFunction& G,
                                     const MixedNormSpec& spec) {
  if (!spec.weight.L()) throw std::invalid_argument("verify_young: weight needs certified L");
  const double L = *spec.weight.L();
  const double lam = spec.lambda;
  const double mu = lam >= 0 ? lam * L : lam / L;
  const double nu = lam >= 0 ? lam * L : std::abs(lam);

  InequalityReport rep;
  rep.lhs = mixed_norm(convolve(F, G), spec);
  MixedNormSpec fs = spec;
  fs.lambda = mu;
  rep.rhs_f = mixed_norm(F, fs);
  MixedNormSpec gs = spec;
  gs.lambda = nu;
  gs.p = 1;
  gs.q = 1;
  rep.rhs_g = mixed_norm(G, gs);
  rep.constant = rep.lhs / (rep.rhs_f * rep.rhs_g);
  rep.pass = std::isfinite(rep.lhs) && std::isfinite(rep.rhs_f) && std::isfinite(rep.rhs_g) &&
             std::isfinite(rep.constant);
  return rep;
}

/// Prop-2.8 style amalgam convolution estimate, lambda > 0:
///   ||F*G||_{W(L^inf_{m_lambda})} <= C ||F||_{L^inf_{m_{lambda L}}} ||G||_{L^1_{m_{lambda L^2}}}.
inline InequalityReport verify_amalgam_conv(const PhasePlaneFunction& F,
                                            const PhasePlaneFunction& G, double lambda,
                                            const WeightFunction& w) {
  if (!w.L()) throw std::invalid_argument("verify_amalgam_conv: weight needs certified L");
  if (lambda <= 0) throw std::invalid_argument("verify_amalgam_conv: lambda must be > 0");
  const double L = *w.L();
  InequalityReport rep;
  MixedNormSpec lhs_spec{inf, inf, lambda, w};
  rep.lhs = amalgam_norm(convolve(F, G), lhs_spec);
  MixedNormSpec fs{inf, inf, lambda * L, w};
  rep.rhs_f = mixed_norm(F, fs);
  MixedNormSpec gs{1, 1, lambda * L * L, w};
  rep.rhs_g = mixed_norm(G, gs);
  rep.constant = rep.lhs / (rep.rhs_f * rep.rhs_g);
  rep.pass = std::isfinite(rep.lhs) && std::isfinite(rep.rhs_f) && std::isfinite(rep.rhs_g) &&
             std::isfinite(rep.constant);
  return rep;
}

struct LatticeRestriction {
  CoefficientArray samples;
  bool nearest_node = false;  // lattice points did not fall exactly on grid nodes
};

/// Samples F on the truncated lattice alpha Z^d x beta Z^d (as far as the
/// grid extent allows).
inline LatticeRestriction restrict_to_lattice(const PhasePlaneFunction& F, double alpha,
                                              double beta) {
  if (alpha <= 0 || beta <= 0)
    throw std::invalid_argument("restrict_to_lattice: alpha, beta must be > 0");
  const int d = F.d();
  LatticeSpec lat;
  lat.alpha0 = alpha;
  lat.beta0 = beta;
  lat.d = d;
  lat.K = static_cast<int>(std::floor((F.Rx() - F.hx()) / alpha));
  lat.N = static_cast<int>(std::floor((F.Rxi() - F.hxi()) / beta));
  if (lat.K < 0 || lat.N < 0)
    throw std::invalid_argument("restrict_to_lattice: lattice exceeds grid extent");

  LatticeRestriction res;
  res.samples = CoefficientArray(lat);
  std::vector<int> jx(static_cast<std::size_t>(d)), jxi(static_cast<std::size_t>(d));
  std::vector<int> kv(static_cast<std::size_t>(d)), nv(static_cast<std::size_t>(d));
  for_each_index(-lat.K, lat.K, d, [&](std::span<const int> k) {
    std::copy(k.begin(), k.end(), kv.begin());
    for_each_index(-lat.N, lat.N, d, [&](std::span<const int> n) {
      std::copy(n.begin(), n.end(), nv.begin());
      for (int a = 0; a < d; ++a) {
        const double fx = (alpha * kv[static_cast<std::size_t>(a)] + F.Rx()) / F.hx();
        const double fxi = (beta * nv[static_cast<std::size_t>(a)] + F.Rxi()) / F.hxi();
        jx[static_cast<std::size_t>(a)] = static_cast<int>(std::llround(fx));
        jxi[static_cast<std::size_t>(a)] = static_cast<int>(std::llround(fxi));
        if (std::abs(fx - jx[static_cast<std::size_t>(a)]) > 1e-9 ||
            std::abs(fxi - jxi[static_cast<std::size_t>(a)]) > 1e-9)
          res.nearest_node = true;
      }
      res.samples.at(kv, nv) = F.values()[F.flat(jx, jxi)];
    });
  });
  return res;
}

/// Weighted little-lpq norm of lattice samples with the sampled weight
/// m_tilde(k,n) = m_lambda(alpha k, beta n).
inline double lattice_lpq_norm(const CoefficientArray& c, const MixedNormSpec& spec) {
  const auto& lat = c.lattice();
  const int d = lat.d;
  std::vector<double> outer, inner;
  std::vector<int> nv(static_cast<std::size_t>(d));
  bool overflow = false;
  for_each_index(-lat.N, lat.N, d, [&](std::span<const int> n) {
    std::copy(n.begin(), n.end(), nv.begin());
    inner.clear();
    for_each_index(-lat.K, lat.K, d, [&](std::span<const int> k) {
      const double t = std::abs(c.at(k, nv)) * spec.m(lat.sigma_norm(k, nv));
      if (!std::isfinite(t)) overflow = true;
      inner.push_back(t);
    });
    outer.push_back(detail::lp_reduce(inner, spec.p, 1.0));
  });
  if (overflow) return inf;
  const double r = detail::lp_reduce(outer, spec.q, 1.0);
  return std::isfinite(r) ? r : inf;
}

/// Prop-2.7 style sampling estimate: lattice-sample norm against the
/// amalgam norm at weight index lambda L.
inline InequalityReport verify_lattice_sampling(const PhasePlaneFunction& F, double alpha,
                                                double beta, const MixedNormSpec& spec) {
  if (!spec.weight.L())
    throw std::invalid_argument("verify_lattice_sampling: weight needs certified L");
  const double L = *spec.weight.L();
  auto restr = restrict_to_lattice(F, alpha, beta);
  InequalityReport rep;
  rep.lhs = lattice_lpq_norm(restr.samples, spec);
  MixedNormSpec ws = spec;
  ws.lambda = spec.lambda * L;
  rep.rhs_f = amalgam_norm(F, ws);
  rep.rhs_g = 1.0;
  rep.constant = rep.lhs / rep.rhs_f;
  rep.pass = std::isfinite(rep.lhs) && std::isfinite(rep.rhs_f) && std::isfinite(rep.constant);
  return rep;
}

}  // namespace tfa

#endif  // TFA_GRID_HPP
