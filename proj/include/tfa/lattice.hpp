// Lattice parameters and truncated coefficient arrays shared by the grid,
// gabor and koethe layers.

#ifndef TFA_LATTICE_HPP
#define TFA_LATTICE_HPP

#include <vector>

#include "tfa/common.hpp"

namespace tfa {

/// Time-frequency lattice alpha0 Z^d x beta0 Z^d with truncation radii
/// K (time index) and N (frequency index).
struct LatticeSpec {
  double alpha0 = 1.0;
  double beta0 = 1.0;
  int d = 1;
  int K = 16;
  int N = 16;

  /// Under the convention FT(u)(xi) = int u(x) e^{-i<x,xi>} dx, the Gaussian
  /// window generates a frame iff alpha0*beta0 < 2*pi.
  bool frame_guarantee() const { return alpha0 > 0 && beta0 > 0 && alpha0 * beta0 < 2 * pi; }

  /// Euclidean norm of the lattice point sigma = (alpha0*k, beta0*n).
  double sigma_norm(std::span<const int> k, std::span<const int> n) const {
    double s = 0;
    for (int v : k) s += alpha0 * alpha0 * static_cast<double>(v) * v;
    for (int v : n) s += beta0 * beta0 * static_cast<double>(v) * v;
    return std::sqrt(s);
  }
};

/// Complex coefficients indexed by (k, n) with |k|_inf <= K, |n|_inf <= N.
class CoefficientArray {
 public:
  CoefficientArray() = default;
  explicit CoefficientArray(const LatticeSpec& lat) : lat_(lat) {
    nk_ = 2 * lat.K + 1;
    nn_ = 2 * lat.N + 1;
    std::size_t total = 1;
    for (int a = 0; a < lat.d; ++a) total *= static_cast<std::size_t>(nk_);
    for (int a = 0; a < lat.d; ++a) total *= static_cast<std::size_t>(nn_);
    v_.assign(total, cplx{0, 0});
  }

  const LatticeSpec& lattice() const { return lat_; }
  std::vector<cplx>& values() { return v_; }
  const std::vector<cplx>& values() const { return v_; }

  std::size_t flat(std::span<const int> k, std::span<const int> n) const {
    std::size_t idx = 0;
    for (int a = 0; a < lat_.d; ++a)
      idx = idx * static_cast<std::size_t>(nk_) + static_cast<std::size_t>(k[a] + lat_.K);
    for (int a = 0; a < lat_.d; ++a)
      idx = idx * static_cast<std::size_t>(nn_) + static_cast<std::size_t>(n[a] + lat_.N);
    return idx;
  }

  cplx& at(std::span<const int> k, std::span<const int> n) { return v_[flat(k, n)]; }
  cplx at(std::span<const int> k, std::span<const int> n) const { return v_[flat(k, n)]; }

  // d = 1 convenience accessors
  cplx& at(int k, int n) {
    const int kk[1] = {k}, nn[1] = {n};
    return v_[flat(kk, nn)];
  }
  cplx at(int k, int n) const {
    const int kk[1] = {k}, nn[1] = {n};
    return v_[flat(kk, nn)];
  }

  double max_abs() const {
    double m = 0;
    for (const auto& z : v_) m = std::max(m, std::abs(z));
    return m;
  }

  /// Runs fn(k, n, value) over every stored index pair.
  void for_each(const std::function<void(std::span<const int>, std::span<const int>, cplx)>& fn) const {
    std::vector<int> k(static_cast<std::size_t>(lat_.d));
    for_each_index(-lat_.K, lat_.K, lat_.d, [&](std::span<const int> kk) {
      std::copy(kk.begin(), kk.end(), k.begin());
      for_each_index(-lat_.N, lat_.N, lat_.d, [&](std::span<const int> nn) {
        fn(k, nn, v_[flat(k, nn)]);
      });
    });
  }

  /// Boundary-shell magnitude below 1e-8 times the peak.
  bool truncation_adequate(double tol = 1e-8) const {
    const double peak = max_abs();
    if (peak == 0) return true;
    double boundary = 0;
    for_each([&](std::span<const int> k, std::span<const int> n, cplx z) {
      if (sup_norm(k) == lat_.K || sup_norm(n) == lat_.N)
        boundary = std::max(boundary, std::abs(z));
    });
    return boundary <= tol * peak;
  }

 private:
  LatticeSpec lat_;
  int nk_ = 0, nn_ = 0;
  std::vector<cplx> v_;
};

/// Coefficients indexed by multi-indices gamma in [0, Gamma]^d (Hermite
/// expansions).
class MultiIndexArray {
 public:
  MultiIndexArray() = default;
  MultiIndexArray(int d, int Gamma) : d_(d), Gamma_(Gamma) {
    std::size_t total = 1;
    for (int a = 0; a < d; ++a) total *= static_cast<std::size_t>(Gamma + 1);
    v_.assign(total, cplx{0, 0});
  }

  int d() const { return d_; }
  int Gamma() const { return Gamma_; }
  std::vector<cplx>& values() { return v_; }
  const std::vector<cplx>& values() const { return v_; }

  std::size_t flat(std::span<const int> gamma) const {
    std::size_t idx = 0;
    for (int a = 0; a < d_; ++a)
      idx = idx * static_cast<std::size_t>(Gamma_ + 1) + static_cast<std::size_t>(gamma[a]);
    return idx;
  }
  cplx& at(std::span<const int> gamma) { return v_[flat(gamma)]; }
  cplx at(std::span<const int> gamma) const { return v_[flat(gamma)]; }
  cplx& at1(int g) {
    const int gg[1] = {g};
    return v_[flat(gg)];
  }
  cplx at1(int g) const {
    const int gg[1] = {g};
    return v_[flat(gg)];
  }

  void for_each(const std::function<void(std::span<const int>, cplx)>& fn) const {
    for_each_index(0, Gamma_, d_, [&](std::span<const int> g) { fn(g, v_[flat(g)]); });
  }

 private:
  int d_ = 1, Gamma_ = 0;
  std::vector<cplx> v_;
};

}  // namespace tfa

#endif  // TFA_LATTICE_HPP
