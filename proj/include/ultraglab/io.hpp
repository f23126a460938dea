#pragma once

/// File formats: the binary sampled-net array format, CSV fit/spectral
/// tables, and mollifier export/import with a JSON sidecar.

#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ultraglab/embed.hpp"
#include "ultraglab/spectral.hpp"

namespace ultraglab {

using json = nlohmann::ordered_json;

/// Sampled net payload: per-eps complex arrays on a box grid.
struct SampledNetData {
  Box box;
  std::vector<double> eps_values;
  std::vector<std::vector<cplx>> arrays;  ///< one per eps, row-major
};

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
         std::uint32_t(b[3]) << 24;
}

inline void put_f64(std::ostream& os, double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

inline double get_f64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= std::uint64_t(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &u, 8);
  return v;
}

}  // namespace detail

/// Binary layout: "UGN1", u32 dim, u32 n per axis, u32 eps_count,
/// f64 lo/hi per axis, f64 eps values, then per eps the interleaved
/// re/im little-endian doubles of the samples.
inline void write_net_binary(const std::string& path, const SampledNetData& data) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("write_net_binary: cannot open " + path);
  os.write("UGN1", 4);
  detail::put_u32(os, std::uint32_t(data.box.dim));
  for (int ax = 0; ax < data.box.dim; ++ax) detail::put_u32(os, std::uint32_t(data.box.n[ax]));
  detail::put_u32(os, std::uint32_t(data.eps_values.size()));
  for (int ax = 0; ax < data.box.dim; ++ax) {
    detail::put_f64(os, data.box.lo[ax]);
    detail::put_f64(os, data.box.hi[ax]);
  }
  for (double e : data.eps_values) detail::put_f64(os, e);
  for (const auto& arr : data.arrays) {
    for (const auto& v : arr) {
      detail::put_f64(os, v.real());
      detail::put_f64(os, v.imag());
    }
  }
}

inline SampledNetData read_net_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("read_net_binary: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (std::strncmp(magic, "UGN1", 4) != 0) throw ConfigError("read_net_binary: bad magic");
  SampledNetData data;
  data.box.dim = int(detail::get_u32(is));
  if (data.box.dim != 1 && data.box.dim != 2) throw ConfigError("read_net_binary: bad dim");
  for (int ax = 0; ax < data.box.dim; ++ax) data.box.n[ax] = int(detail::get_u32(is));
  if (data.box.dim == 1) data.box.n[1] = 1;
  const int eps_count = int(detail::get_u32(is));
  for (int ax = 0; ax < data.box.dim; ++ax) {
    data.box.lo[ax] = detail::get_f64(is);
    data.box.hi[ax] = detail::get_f64(is);
  }
  data.box.validate();
  for (int i = 0; i < eps_count; ++i) data.eps_values.push_back(detail::get_f64(is));
  for (int i = 0; i < eps_count; ++i) {
    std::vector<cplx> arr(data.box.total_samples());
    for (auto& v : arr) {
      const double re = detail::get_f64(is);
      const double im = detail::get_f64(is);
      v = {re, im};
    }
    data.arrays.push_back(std::move(arr));
  }
  if (!is) throw ConfigError("read_net_binary: truncated file");
  return data;
}

/// Net backed by imported per-eps arrays; cubic interpolation off-grid,
/// finite differences for derivatives.
inline Net sampled_net(std::string id, const SampledNetData& data) {
  auto payload = std::make_shared<const SampledNetData>(data);
  Net n;
  n.id = std::move(id);
  n.dim = data.box.dim;
  n.provenance = "imported";
  n.sample_grid = data.box;
  n.evaluator = [payload](double eps, const Point& x) -> cplx {
    for (size_t i = 0; i < payload->eps_values.size(); ++i)
      if (payload->eps_values[i] == eps)
        return interp_cubic(payload->box, payload->arrays[i], x);
    throw OutOfDomain("sampled net: eps not among the stored values");
  };
  return n;
}

inline SampledNetData sample_net_data(const Net& f, const Box& box, const EpsGrid& grid) {
  SampledNetData data;
  data.box = box;
  for (double eps : grid.values) {
    data.eps_values.push_back(eps);
    data.arrays.push_back(sample_net(f, box, eps));
  }
  return data;
}

// ---------------------------------------------------------------------------
// CSV tables

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += "\"";
  return out;
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline std::string spectral_table_csv(const std::string& net_id,
                                      const WindowedSpectrumResult& spec) {
  std::string out = "net_id,x0,bin,eps,xi_shell,magnitude,saturated\n";
  for (const auto& prof : spec.per_bin) {
    for (const auto& s : prof.samples) {
      std::string x0 = format_double(prof.window_center[0]);
      out += csv_quote(net_id) + "," + x0 + "," + std::to_string(prof.bin) + "," +
             format_double(s.eps) + "," + format_double(s.xi_rep) + "," +
             format_double(s.magnitude) + "," + (s.saturated ? "1" : "0") + "\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mollifier export / import

inline void write_mollifier(const std::string& base_path, const Mollifier& m) {
  SampledNetData data;
  data.box = m.box;
  data.eps_values = {1.0};
  data.arrays = {m.phi()};
  write_net_binary(base_path + ".bin", data);
  json meta;
  meta["sigma"] = m.sigma;
  meta["xi_inner"] = m.freq_profile.r_inner;
  meta["xi_outer"] = m.freq_profile.r_outer;
  json moments = json::object();
  for (const auto& [q, e] : m.diagnostics.moment_errors) moments[std::to_string(q)] = e;
  meta["moment_errors"] = moments;
  meta["decay_c"] = m.diagnostics.decay_c;
  meta["decay_k"] = m.diagnostics.decay_k;
  meta["s_sigma_norm"] = m.diagnostics.s_sigma_norm;
  std::ofstream os(base_path + ".json");
  if (!os) throw ConfigError("write_mollifier: cannot open " + base_path + ".json");
  os << meta.dump(2) << "\n";
}

/// Rebuilds the mollifier from exported samples: derivative arrays come from
/// spectral differentiation of the stored profile.
inline Mollifier read_mollifier(const std::string& base_path) {
  const auto data = read_net_binary(base_path + ".bin");
  std::ifstream is(base_path + ".json");
  if (!is) throw ConfigError("read_mollifier: cannot open " + base_path + ".json");
  json meta = json::parse(is);

  Mollifier m;
  m.sigma = meta.at("sigma").get<double>();
  m.box = data.box;
  m.freq_profile.sigma = m.sigma;
  m.freq_profile.r_inner = meta.at("xi_inner").get<double>();
  m.freq_profile.r_outer = meta.at("xi_outer").get<double>();
  m.freq_profile.box = data.box;
  m.deriv_samples.resize(kMollDerivCap + 1);
  m.deriv_samples[0] = data.arrays.at(0);
  for (int q = 1; q <= kMollDerivCap; ++q)
    m.deriv_samples[q] = spectral_derivative(m.box, m.phi(), MultiIndex{q});
  m.phi_hat = dft_forward_1d(m.box, m.phi());
  m.cdf.resize(m.box.n[0]);
  cplx acc = 0.0;
  for (int j = 0; j < m.box.n[0]; ++j) {
    if (j > 0) acc += 0.5 * (m.phi()[j - 1] + m.phi()[j]) * m.box.dx(0);
    m.cdf[j] = acc;
  }
  for (const auto& [key, val] : meta.at("moment_errors").items())
    m.diagnostics.moment_errors[std::stoi(key)] = val.get<double>();
  m.diagnostics.decay_c = meta.at("decay_c").get<double>();
  m.diagnostics.decay_k = meta.at("decay_k").get<double>();
  m.diagnostics.s_sigma_norm = meta.at("s_sigma_norm").get<double>();
  return m;
}

}  // namespace ultraglab
