// JSON config loading, JSON/CSV report serialization and the binary
// SampledFunction container. All numeric output uses 17 significant
// digits; no timestamps, so identical inputs give byte-identical files.

#ifndef TFA_IO_HPP
#define TFA_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tfa/gabor.hpp"
#include "tfa/grid.hpp"
#include "tfa/koethe.hpp"
#include "tfa/komatsu.hpp"
#include "tfa/weights.hpp"

namespace tfa {

using json = nlohmann::json;

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// config parsing

inline WeightFunction weight_from_json(const json& j) {
  const std::string family = j.at("family").get<std::string>();
  const double cap = j.value("cap", 1e6);
  if (family == "log_power") return WeightFunction::log_power(j.at("beta").get<double>(), cap);
  if (family == "gevrey_root") return WeightFunction::gevrey_root(j.at("s").get<double>(), cap);
  if (family == "custom") {
    std::vector<std::pair<double, double>> samples;
    for (const auto& row : j.at("samples"))
      samples.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
    return WeightFunction::custom(std::move(samples));
  }
  throw std::invalid_argument("weight_from_json: unknown family '" + family + "'");
}

inline MpSequence sequence_from_json(const json& j) {
  const std::string family = j.at("family").get<std::string>();
  const int P_max = j.value("P_max", 10000);
  if (family == "factorial_power") return MpSequence::factorial_power(j.at("s").get<double>(), P_max);
  if (family == "exp_poly")
    return MpSequence::exp_poly(j.at("c").get<double>(), j.at("r").get<double>(), P_max);
  if (family == "custom") return MpSequence::custom(j.at("logM").get<std::vector<double>>());
  throw std::invalid_argument("sequence_from_json: unknown family '" + family + "'");
}

struct GaborConfig {
  LatticeSpec lattice;
  double h = 1.0 / 64;
  double R = 12;
  double cg_tol = 1e-9;
  std::string window = "gaussian";
};

inline GaborConfig gabor_from_json(const json& j) {
  GaborConfig c;
  c.lattice.alpha0 = j.value("alpha0", 1.0);
  c.lattice.beta0 = j.value("beta0", 1.0);
  c.lattice.d = j.value("d", 1);
  c.lattice.K = j.value("K", 16);
  c.lattice.N = j.value("N", 16);
  c.h = j.value("h", 1.0 / 64);
  c.R = j.value("R", 12.0);
  c.cg_tol = j.value("cg_tol", 1e-9);
  c.window = j.value("window", std::string("gaussian"));
  if (c.window != "gaussian")
    throw std::invalid_argument("gabor_from_json: only the gaussian window is built in");
  return c;
}

/// Content hash of everything the canonical dual depends on.
inline std::uint64_t gabor_config_hash(const GaborConfig& c, const SampledFunction& window) {
  std::uint64_t h = fnv1a(&c.lattice.alpha0, sizeof(double));
  h = fnv1a(&c.lattice.beta0, sizeof(double), h);
  h = fnv1a(&c.lattice.d, sizeof(int), h);
  h = fnv1a(&c.lattice.K, sizeof(int), h);
  h = fnv1a(&c.lattice.N, sizeof(int), h);
  h = fnv1a(&c.h, sizeof(double), h);
  h = fnv1a(&c.R, sizeof(double), h);
  h = fnv1a(&c.cg_tol, sizeof(double), h);
  h = fnv1a(window.values().data(), window.values().size() * sizeof(cplx), h);
  return h;
}

// ---------------------------------------------------------------------------
// report serialization

inline json to_json(const InequalityReport& r, double h, double R) {
  return json{{"lhs", r.lhs},
              {"rhs", r.rhs_f * r.rhs_g},
              {"constant", r.constant},
              {"pass", r.pass},
              {"grid", {{"h", h}, {"R", R}}}};
}

inline json to_json(const GPReport& r) {
  json shells = json::array();
  double prev = 0;
  for (std::size_t i = 0; i < r.partial_sums.size(); ++i) {
    const auto& [radius, sum] = r.partial_sums[i];
    const double block = sum - prev;
    const double prev_block = i > 0 ? r.partial_sums[i - 1].second -
                                          (i > 1 ? r.partial_sums[i - 2].second : 0.0)
                                    : 0.0;
    shells.push_back({{"radius", radius},
                      {"sum", sum},
                      {"ratio", prev_block > 0 ? block / prev_block : 0.0}});
    prev = sum;
  }
  json out{{"k", r.k},
           {"shells", shells},
           {"verdict", to_string(r.verdict)},
           {"tail", r.extrapolated_tail}};
  if (r.m_found) out["m"] = *r.m_found;
  return out;
}

inline const char* to_string(KomatsuCondition c) {
  switch (c) {
    case KomatsuCondition::M1: return "M1";
    case KomatsuCondition::M2prime: return "M2prime";
    case KomatsuCondition::Cond12: return "1.2";
    default: return "4.3";
  }
}

inline json to_json(const ConditionReport& r) {
  json out{{"condition", to_string(r.condition)}, {"holds", to_string(r.holds)}};
  json w = json::object();
  if (r.A > 0) w["A"] = r.A;
  if (r.H > 0) w["H"] = r.H;
  if (r.B > 0) w["B"] = r.B;
  if (r.C > 0) w["C"] = r.C;
  out["witnesses"] = w;
  if (r.failure_index >= 0) out["failure_index"] = r.failure_index;
  return out;
}

inline json to_json(const KomatsuVerdict& v) {
  return json{{"applicable", v.applicable},
              {"nuclear", v.nuclear},
              {"consistent", v.consistent},
              {"M1", to_json(v.m1)},
              {"1.2", to_json(v.cond12)},
              {"M2prime", to_json(v.m2prime)},
              {"4.3", to_json(v.cond43)}};
}

/// Serializes with 17-significant-digit decimal floats (nlohmann's default
/// shortest-roundtrip format is close, but the contract pins the digits).
inline void write_json(const json& j, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_json: cannot open " + path);
  os << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// CSV exports

inline void write_conjugate_csv(const YoungConjugateTable& tab, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_conjugate_csv: cannot open " + path);
  os << "s,phi_star,argmax_t\n";
  for (std::size_t i = 0; i < tab.s_grid.size(); ++i)
    os << fmt17(tab.s_grid[i]) << ',' << fmt17(tab.values[i]) << ',' << fmt17(tab.argmax_t[i])
       << '\n';
}

inline void write_coefficients_csv(const CoefficientArray& c, const WeightFunction& w,
                                   const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_coefficients_csv: cannot open " + path);
  os << "k,n,re,im,abs,omega_sigma\n";
  const auto& lat = c.lattice();
  c.for_each([&](std::span<const int> k, std::span<const int> n, cplx z) {
    for (std::size_t a = 0; a < k.size(); ++a) os << (a ? " " : "") << k[a];
    os << ',';
    for (std::size_t a = 0; a < n.size(); ++a) os << (a ? " " : "") << n[a];
    const double sn = lat.sigma_norm(k, n);
    os << ',' << fmt17(z.real()) << ',' << fmt17(z.imag()) << ',' << fmt17(std::abs(z)) << ','
       << fmt17(w(std::min(sn, w.domain_cap()))) << '\n';
  });
}

inline void write_associated_csv(const AssociatedFunction& M, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_associated_csv: cannot open " + path);
  os << "t,M,argmax_p\n";
  for (std::size_t i = 0; i < M.t_grid().size(); ++i)
    os << fmt17(M.t_grid()[i]) << ',' << fmt17(M.values()[i]) << ',' << M.argmax_p()[i] << '\n';
}

// ---------------------------------------------------------------------------
// binary SampledFunction container

inline void save_sampled(const SampledFunction& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_sampled: cannot open " + path);
  const char magic[8] = {'T', 'F', 'A', 'S', 'F', 'N', '0', '1'};
  os.write(magic, 8);
  const std::int32_t d = f.d();
  const std::int32_t dtype = 1;  // complex128
  const double h = f.h(), R = f.R();
  os.write(reinterpret_cast<const char*>(&d), 4);
  os.write(reinterpret_cast<const char*>(&dtype), 4);
  os.write(reinterpret_cast<const char*>(&h), 8);
  os.write(reinterpret_cast<const char*>(&R), 8);
  os.write(reinterpret_cast<const char*>(f.values().data()),
           static_cast<std::streamsize>(f.values().size() * sizeof(cplx)));
}

inline SampledFunction load_sampled(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_sampled: cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::string(magic, 8) != "TFASFN01")
    throw std::runtime_error("load_sampled: bad magic in " + path);
  std::int32_t d = 0, dtype = 0;
  double h = 0, R = 0;
  is.read(reinterpret_cast<char*>(&d), 4);
  is.read(reinterpret_cast<char*>(&dtype), 4);
  is.read(reinterpret_cast<char*>(&h), 8);
  is.read(reinterpret_cast<char*>(&R), 8);
  if (dtype != 1) throw std::runtime_error("load_sampled: unsupported dtype");
  SampledFunction f(d, h, R);
  is.read(reinterpret_cast<char*>(f.values().data()),
          static_cast<std::streamsize>(f.values().size() * sizeof(cplx)));
  if (!is) throw std::runtime_error("load_sampled: truncated payload in " + path);
  return f;
}

/// 1-d slice CSV (x, re, im).
inline void write_sampled_csv(const SampledFunction& f, const std::string& path) {
  if (f.d() != 1) throw std::invalid_argument("write_sampled_csv: d = 1 only");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_sampled_csv: cannot open " + path);
  os << "x,re,im\n";
  for (int j = 0; j < f.n_per_axis(); ++j) {
    const cplx z = f.values()[static_cast<std::size_t>(j)];
    os << fmt17(f.coord(j)) << ',' << fmt17(z.real()) << ',' << fmt17(z.imag()) << '\n';
  }
}

}  // namespace tfa

#endif  // TFA_IO_HPP
