#pragma once

/// Scenario-driven batch runner: builds nets from a JSON document, runs the
/// requested analyses, and assembles a byte-deterministic report plus CSV
/// tables. Wall-clock and other volatile data go to a separate meta record.

#include <atomic>
#include <chrono>
#include <thread>

#include "ultraglab/io.hpp"
#include "ultraglab/microlocal.hpp"

namespace ultraglab {

inline constexpr const char* kVersion = "0.1.0";

struct Scenario {
  double sigma = 2.0;
  int dim = 1;
  Box box = Box::make1d(-2.0, 2.0, 4096);
  EpsGrid eps_grid = EpsGrid::standard();
  double moll_halfwidth = 8.0;
  int moll_n = 4096;
  int moment_cap = 6;
  FitPolicy fit_policy;
  MicrolocalPolicy micro_policy;
  int bins = 2;
  std::uint64_t seed = 0;
  json raw;
};

namespace detail {

inline cplx parse_cplx(const json& v) {
  if (v.is_number()) return cplx(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2)
    return cplx(v[0].get<double>(), v[1].get<double>());
  throw ConfigError("expected a number or [re, im] pair");
}

inline Point parse_point(const json& v, int dim) {
  if (!v.is_array() || int(v.size()) != dim)
    throw ConfigError("expected a point array of length " + std::to_string(dim));
  Point p{0.0, 0.0};
  for (int ax = 0; ax < dim; ++ax) p[ax] = v[ax].get<double>();
  return p;
}

inline MultiIndex parse_alpha(const json& v, int dim) {
  if (!v.is_array() || int(v.size()) != dim) throw ConfigError("bad multi-index");
  MultiIndex a;
  for (int ax = 0; ax < dim; ++ax) a[ax] = v[ax].get<int>();
  return a;
}

}  // namespace detail

inline Scenario parse_scenario(const json& doc) {
  Scenario sc;
  sc.raw = doc;
  try {
    sc.sigma = doc.value("sigma", 2.0);
    if (!(sc.sigma >= 1.0)) throw ConfigError("scenario.sigma: must be >= 1");
    sc.dim = doc.value("dim", 1);
    if (sc.dim != 1 && sc.dim != 2) throw ConfigError("scenario.dim: must be 1 or 2");
    if (doc.contains("box")) {
      const auto& b = doc.at("box");
      if (sc.dim == 1)
        sc.box = Box::make1d(b.at("lo")[0].get<double>(), b.at("hi")[0].get<double>(),
                             b.at("n")[0].get<int>());
      else
        sc.box = Box::make2d(b.at("lo")[0].get<double>(), b.at("hi")[0].get<double>(),
                             b.at("n")[0].get<int>(), b.at("lo")[1].get<double>(),
                             b.at("hi")[1].get<double>(), b.at("n")[1].get<int>());
    } else if (sc.dim == 2) {
      sc.box = Box::make2d(-2.0, 2.0, 256, -2.0, 2.0, 256);
    }
    if (doc.contains("eps_grid")) {
      const auto& g = doc.at("eps_grid");
      sc.eps_grid = EpsGrid::geometric(g.value("start", 1e-1), g.value("end", 1e-4),
                                       g.value("count", 10));
    }
    if (doc.contains("mollifier")) {
      const auto& m = doc.at("mollifier");
      sc.moll_halfwidth = m.value("halfwidth", 8.0);
      sc.moll_n = m.value("n", 4096);
      sc.moment_cap = m.value("moment_cap", 6);
    }
    if (doc.contains("policies")) {
      const auto& p = doc.at("policies");
      sc.fit_policy.k_min = p.value("k_min", sc.fit_policy.k_min);
      sc.fit_policy.k_cap = p.value("k_cap", sc.fit_policy.k_cap);
      sc.fit_policy.r_max = p.value("r_max", sc.fit_policy.r_max);
      sc.micro_policy.k2_min = p.value("k2_min", sc.micro_policy.k2_min);
      sc.micro_policy.r_max = p.value("spectral_r_max", sc.micro_policy.r_max);
      sc.micro_policy.lambda_window = p.value("lambda_window", sc.micro_policy.lambda_window);
      if (p.contains("window_outer"))
        sc.micro_policy.window_outer = p.at("window_outer").get<double>();
    }
    sc.bins = doc.value("bins", sc.dim == 1 ? 2 : 16);
    sc.seed = doc.value("seed", std::uint64_t(0));
    if (!doc.contains("nets") || !doc.at("nets").is_array())
      throw ConfigError("scenario.nets: required array");
    if (doc.contains("analyses") && !doc.at("analyses").is_array())
      throw ConfigError("scenario.analyses: must be an array");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  return sc;
}

/// Materialized scenario state: the mollifier and all named nets.
struct ScenarioState {
  Scenario sc;
  std::shared_ptr<const Mollifier> moll;
  std::shared_ptr<const CutoffProfile> cut;
  std::map<std::string, Net> nets;
  std::map<std::string, json> embed_reports;  ///< growth fits of embedded nets
};

namespace detail {

inline json fit_to_json(const AsymptoticFit& f) {
  json j;
  j["log_c"] = f.log_c;
  j["k"] = f.k == kInfRate ? json("inf") : json(f.k);
  j["sign"] = f.sign;
  j["residual"] = f.residual_rms;
  j["saturated"] = f.saturated_count;
  j["used"] = f.used_count;
  return j;
}

inline json classification_to_json(const Classification& c) {
  json j;
  j["verdict"] = to_string(c.verdict);
  j["k_hat"] = c.k_hat == kInfRate ? json("inf") : json(c.k_hat);
  json pa = json::object();
  for (const auto& [al, fit] : c.per_alpha) pa[al.str()] = fit_to_json(fit);
  j["per_alpha"] = pa;
  return j;
}

inline json two_scale_to_json(const TwoScaleFit& f) {
  json j;
  j["log_c"] = f.log_c;
  j["k1"] = f.k1;
  j["k2"] = f.k2;
  j["residual"] = f.residual_rms;
  return j;
}

inline json wf_to_json(const WaveFrontEstimate& wf) {
  json entries = json::array();
  for (const auto& [p, b] : wf.entries) {
    json e;
    e["x_index"] = p;
    json x = json::array();
    for (int ax = 0; ax < wf.partition.dim; ++ax) x.push_back(wf.probes[p][ax]);
    e["x"] = x;
    e["bin"] = b;
    if (wf.partition.dim == 2) {
      e["theta_range"] = json::array(
          {wf.partition.bins[b].theta_lo, wf.partition.bins[b].theta_hi});
    } else {
      e["theta_range"] = wf.partition.bins[b].sign > 0 ? "+" : "-";
    }
    auto it = wf.diagnostics.find({p, b});
    if (it != wf.diagnostics.end()) {
      e["k1"] = it->second.k1;
      e["k2"] = it->second.k2;
      e["residual"] = it->second.residual_rms;
    }
    entries.push_back(e);
  }
  return entries;
}

inline Atom parse_atom(const json& a, const Scenario& sc) {
  Atom atom;
  const std::string kind = a.at("kind").get<std::string>();
  if (kind == "delta_deriv") atom.kind = Atom::DeltaDeriv;
  else if (kind == "jump") atom.kind = Atom::Jump;
  else if (kind == "density") atom.kind = Atom::Density;
  else if (kind == "series_term") atom.kind = Atom::SeriesTerm;
  else throw ConfigError("unknown atom kind: " + kind);
  if (a.contains("order")) atom.order = parse_alpha(a.at("order"), sc.dim);
  if (a.contains("location")) atom.location = parse_point(a.at("location"), sc.dim);
  if (a.contains("coeff")) atom.coeff = parse_cplx(a.at("coeff"));
  if (atom.kind == Atom::Density || atom.kind == Atom::SeriesTerm) {
    const auto& prof = a.at("profile");
    const double rin = prof.value("r_inner", 0.25);
    const double rout = prof.value("r_outer", 0.5);
    atom.sample_box = sc.box;
    atom.samples.resize(sc.box.total_samples());
    CutoffProfile cp;
    cp.sigma = std::max(sc.sigma, 1.5);
    cp.r_inner = rin;
    cp.r_outer = rout;
    const Point center =
        prof.contains("center") ? parse_point(prof.at("center"), sc.dim) : Point{0.0, 0.0};
    for (long idx = 0; idx < sc.box.total_samples(); ++idx) {
      const Point p = sc.box.point_at(idx);
      Point d{p[0] - center[0], sc.dim == 2 ? p[1] - center[1] : 0.0};
      atom.samples[idx] = cp.value_radial(norm2(d, sc.dim));
    }
  }
  return atom;
}

}  // namespace detail

inline ScenarioState materialize_scenario(const Scenario& sc) {
  ScenarioState st;
  st.sc = sc;
  const double moll_sigma = std::max(sc.sigma, 1.5);  // mollifier needs sigma > 1
  st.moll = std::make_shared<Mollifier>(
      build_mollifier(moll_sigma, Box::make1d(-sc.moll_halfwidth, sc.moll_halfwidth, sc.moll_n),
                      sc.moment_cap));
  auto cut = std::make_shared<CutoffProfile>();
  cut->sigma = moll_sigma;
  cut->r_inner = 1.0;
  cut->r_outer = 2.0;
  st.cut = cut;

  for (const auto& spec : sc.raw.at("nets")) {
    const std::string id = spec.at("id").get<std::string>();
    if (st.nets.count(id)) throw ConfigError("duplicate net id: " + id);
    Net net;
    if (spec.contains("builtin")) {
      BuiltinParams p;
      p.mollifier = st.moll;
      p.sigma = sc.sigma;
      if (spec.contains("params")) {
        const auto& q = spec.at("params");
        p.center = q.value("center", 0.0);
        p.width = q.value("width", 1.0);
        p.pole = q.value("pole", 0.0);
        p.sigma = q.value("sigma", sc.sigma);
        p.r_inner = q.value("r_inner", 0.5);
        p.r_outer = q.value("r_outer", 1.0);
      }
      net = builtin_net(spec.at("builtin").get<std::string>(), p);
    } else if (spec.contains("combine")) {
      const auto& c = spec.at("combine");
      const std::string a = c.at("a").get<std::string>(), b = c.at("b").get<std::string>();
      if (!st.nets.count(a) || !st.nets.count(b))
        throw ConfigError("combine: unknown net id in '" + id + "'");
      const CombineOp op =
          c.at("op").get<std::string>() == "mul" ? CombineOp::Mul : CombineOp::Add;
      const cplx sa = c.contains("scale_a") ? detail::parse_cplx(c.at("scale_a")) : cplx(1.0);
      const cplx sb = c.contains("scale_b") ? detail::parse_cplx(c.at("scale_b")) : cplx(1.0);
      net = combine(st.nets.at(a), st.nets.at(b), op, sa, sb);
    } else if (spec.contains("derivative")) {
      const auto& d = spec.at("derivative");
      const std::string of = d.at("of").get<std::string>();
      if (!st.nets.count(of)) throw ConfigError("derivative: unknown net id in '" + id + "'");
      net = derivative(st.nets.at(of), detail::parse_alpha(d.at("alpha"), sc.dim));
    } else if (spec.contains("polynomial")) {
      const auto& d = spec.at("polynomial");
      const std::string of = d.at("of").get<std::string>();
      if (!st.nets.count(of)) throw ConfigError("polynomial: unknown net id in '" + id + "'");
      std::vector<cplx> coeffs;
      for (const auto& c : d.at("coeffs")) coeffs.push_back(detail::parse_cplx(c));
      net = compose_polynomial(st.nets.at(of), coeffs);
    } else if (spec.contains("embed")) {
      const auto& e = spec.at("embed");
      DistributionExpr T;
      T.dim = sc.dim;
      T.support_box = sc.box;
      for (int ax = 0; ax < sc.dim; ++ax) {
        const double margin = 0.25 * (sc.box.hi[ax] - sc.box.lo[ax]);
        T.support_box.lo[ax] = sc.box.lo[ax] + margin;
        T.support_box.hi[ax] = sc.box.hi[ax] - margin;
      }
      T.sigma_order = 3.0 * sc.sigma - 1.0;
      T.series_c = e.value("series_c", 1.0);
      T.series_h = e.value("series_h", 1.0);
      T.series_M = e.value("series_M", 1.0);
      for (const auto& a : e.at("atoms")) T.atoms.push_back(detail::parse_atom(a, sc));
      const std::string method = e.value("method", "J0");
      EmbeddingReport rep =
          method == "J" ? embed_cutoff(T, st.moll, st.cut, sc.eps_grid, sc.box)
                        : embed_compact(T, st.moll, sc.eps_grid, sc.box);
      net = rep.net;
      json growth = json::object();
      for (const auto& [al, fit] : rep.per_alpha_growth)
        growth[al.str()] = detail::fit_to_json(fit);
      json jrep;
      jrep["method"] = rep.method;
      jrep["per_alpha_growth"] = growth;
      st.embed_reports[id] = jrep;
    } else if (spec.contains("import")) {
      net = sampled_net(id, read_net_binary(spec.at("import").at("path").get<std::string>()));
    } else {
      throw ConfigError("net '" + id + "': no recognized builder");
    }
    if (net.dim != sc.dim) throw ConfigError("net '" + id + "': dimension mismatch");
    net.id = id;
    st.nets[id] = std::move(net);
  }
  return st;
}

namespace detail {

inline const Net& net_ref(const ScenarioState& st, const json& spec, const char* key) {
  const std::string id = spec.at(key).get<std::string>();
  auto it = st.nets.find(id);
  if (it == st.nets.end()) throw ConfigError(std::string("unknown net id: ") + id);
  return it->second;
}

inline std::vector<Point> parse_probes(const json& spec, const Scenario& sc) {
  std::vector<Point> probes;
  if (spec.contains("probes")) {
    for (const auto& p : spec.at("probes")) probes.push_back(parse_point(p, sc.dim));
  } else {
    // default probe lattice: interior points on a coarse grid
    if (sc.dim == 1) {
      for (double x : {-1.5, -1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0, 1.5})
        probes.push_back({x, 0.0});
    } else {
      for (double x : {-1.0, -0.5, 0.0, 0.5, 1.0})
        for (double y : {-1.0, -0.5, 0.0, 0.5, 1.0}) probes.push_back({x, y});
    }
  }
  return probes;
}

/// Executes one analysis; exceptions are reported by the caller.
inline json run_analysis(const ScenarioState& st, const json& spec,
                         std::string* spectra_csv) {
  const Scenario& sc = st.sc;
  const ScaleModel model = scale_exponent(sc.sigma);
  const std::string type = spec.at("type").get<std::string>();
  json out;
  out["type"] = type;

  if (type == "classify") {
    const Net& f = net_ref(st, spec, "net");
    FunctionClassOptions opt;
    opt.max_order = spec.value("max_order", 1);
    opt.full_per_alpha = spec.value("full", false);
    const auto c = classify_function_net(f, sc.box, sc.eps_grid, model, sc.fit_policy, opt);
    out["net"] = f.id;
    out["result"] = classification_to_json(c);
    return out;
  }
  if (type == "regularity") {
    const Net& f = net_ref(st, spec, "net");
    const auto part = cone_partition(sc.dim, spec.value("bins", sc.bins));
    const auto v = regularity_test(f, sc.box, sc.eps_grid, part, model, sc.micro_policy);
    out["net"] = f.id;
    out["regular"] = v.regular;
    out["fit"] = two_scale_to_json(v.fit);
    out["failing_bins"] = v.failing_bins;
    return out;
  }
  if (type == "sigma_cone") {
    const Net& f = net_ref(st, spec, "net");
    const auto part = cone_partition(sc.dim, spec.value("bins", sc.bins));
    const auto cs = sigma_cone(f, sc.box, sc.eps_grid, part, model, sc.micro_policy);
    out["net"] = f.id;
    out["members"] = std::vector<int>(cs.members.begin(), cs.members.end());
    return out;
  }
  if (type == "sing_support") {
    const Net& f = net_ref(st, spec, "net");
    const auto part = cone_partition(sc.dim, spec.value("bins", sc.bins));
    const auto probes = parse_probes(spec, sc);
    const auto idxs = sing_support(f, probes, sc.box, sc.eps_grid, part, model, sc.micro_policy);
    out["net"] = f.id;
    json pts = json::array();
    for (int i : idxs) {
      json x = json::array();
      for (int ax = 0; ax < sc.dim; ++ax) x.push_back(probes[i][ax]);
      pts.push_back(x);
    }
    out["points"] = pts;
    return out;
  }
  if (type == "wave_front") {
    const Net& f = net_ref(st, spec, "net");
    const auto part = cone_partition(sc.dim, spec.value("bins", sc.bins));
    const auto probes = parse_probes(spec, sc);
    const auto wf = wave_front(f, probes, sc.box, sc.eps_grid, part, model, sc.micro_policy);
    out["net"] = f.id;
    out["entries"] = wf_to_json(wf);
    return out;
  }
  if (type == "product_check") {
    const Net& f = net_ref(st, spec, "f");
    const Net& g = net_ref(st, spec, "g");
    const auto part = cone_partition(sc.dim, spec.value("bins", sc.bins));
    const auto probes = parse_probes(spec, sc);
    const auto res =
        product_wavefront_check(f, g, probes, sc.box, sc.eps_grid, part, model, sc.micro_policy);
    out["f"] = f.id;
    out["g"] = g.id;
    out["status"] = to_string(res.status);
    out["wf_f"] = wf_to_json(res.wf_f);
    out["wf_g"] = wf_to_json(res.wf_g);
    if (res.status != CheckStatus::HypothesisFailed) out["wf_fg"] = wf_to_json(res.wf_fg);
    json viol = json::array();
    for (const auto& v : res.violations)
      viol.push_back(json::array({v.probe, v.bin}));
    out["violations"] = viol;
    return out;
  }
  if (type == "pdo_check") {
    const Net& f = net_ref(st, spec, "f");
    std::vector<std::pair<MultiIndex, Net>> coeffs;
    for (const auto& c : spec.at("coeffs"))
      coeffs.push_back({parse_alpha(c.at("alpha"), sc.dim), net_ref(st, c, "net")});
    const auto part = cone_partition(sc.dim, spec.value("bins", sc.bins));
    const auto probes = parse_probes(spec, sc);
    const auto res = pdo_wavefront_check(f, coeffs, probes, sc.box, sc.eps_grid, part, model,
                                         sc.micro_policy);
    out["f"] = f.id;
    out["status"] = to_string(res.status);
    out["wf_f"] = wf_to_json(res.wf_f);
    out["wf_pf"] = wf_to_json(res.wf_pf);
    return out;
  }
  if (type == "equality") {
    const Net& f = net_ref(st, spec, "f");
    const Net& g = net_ref(st, spec, "g");
    EqualityMode mode = EqualityMode::strong();
    const std::string m = spec.value("mode", "strong");
    if (m == "t_sense") mode = EqualityMode::t_sense(spec.value("t", sc.sigma));
    else if (m == "associated") mode = EqualityMode::associated();
    std::vector<PairTest> tests;
    if (spec.contains("tests")) {
      for (const auto& t : spec.at("tests")) {
        CutoffProfile cp;
        cp.sigma = std::max(sc.sigma, 1.5);
        cp.r_inner = t.value("r_inner", 0.25);
        cp.r_outer = t.value("r_outer", 0.5);
        const Point center =
            t.contains("center") ? parse_point(t.at("center"), sc.dim) : Point{0.0, 0.0};
        const int dim = sc.dim;
        tests.push_back({"bump", [cp, center, dim](const Point& p) {
                           Point d{p[0] - center[0], dim == 2 ? p[1] - center[1] : 0.0};
                           return cp.value_radial(norm2(d, dim));
                         }});
      }
    }
    const auto v = equality_test(f, g, mode, tests, sc.box, sc.eps_grid, model, sc.fit_policy);
    out["f"] = f.id;
    out["g"] = g.id;
    out["mode"] = m;
    out["holds"] = v.holds;
    if (mode.kind == EqualityMode::Strong)
      out["difference"] = classification_to_json(v.strong_class);
    return out;
  }
  if (type == "point_value") {
    const Net& f = net_ref(st, spec, "net");
    const auto& pspec = spec.at("point");
    GenPoint gp;
    const std::string kind = pspec.value("kind", "classical");
    const Point x = parse_point(pspec.at("x"), sc.dim);
    if (kind == "classical") {
      gp = GenPoint::classical(sc.dim, x);
    } else if (kind == "scaled") {
      gp.dim = sc.dim;
      gp.compactly_supported = true;
      gp.witness = sc.box;
      gp.path = [x](double eps) { return Point{eps * x[0], eps * x[1]}; };
    } else {
      throw ConfigError("point_value: unknown point kind " + kind);
    }
    const auto v = point_value(f, gp, sc.eps_grid, model, sc.fit_policy);
    out["net"] = f.id;
    out["classification"] = classification_to_json(v.classification);
    json vals = json::array();
    for (const auto& [eps, val] : v.values)
      vals.push_back(json::array({eps, val.real(), val.imag()}));
    out["values"] = vals;
    return out;
  }
  if (type == "spectrum") {
    const Net& f = net_ref(st, spec, "net");
    const auto part = cone_partition(sc.dim, spec.value("bins", sc.bins));
    std::optional<Window> w;
    if (spec.contains("center")) {
      w.emplace();
      w->dim = sc.dim;
      w->center = parse_point(spec.at("center"), sc.dim);
      w->profile.sigma = std::max(sc.sigma, 1.5);
      w->profile.r_outer = sc.micro_policy.resolve_window_outer(sc.box);
      w->profile.r_inner = w->profile.r_outer / 3.0;
    }
    const auto spec_res =
        windowed_spectrum(f, w ? &*w : nullptr, sc.box, sc.eps_grid, part);
    out["net"] = f.id;
    out["max_magnitude"] = spec_res.max_magnitude;
    if (spectra_csv) *spectra_csv += spectral_table_csv(f.id, spec_res);
    return out;
  }
  throw ConfigError("unknown analysis type: " + type);
}

}  // namespace detail

struct RunResult {
  int exit_code = 0;
  json report;
  json meta;
  std::string fits_csv;
  std::string spectra_csv;
};

/// Runs every analysis (in parallel up to `threads`, results assembled in
/// order) and builds the deterministic report document.
inline RunResult run_scenario_doc(const json& doc, int threads = 1) {
  RunResult rr;
  Scenario sc;
  ScenarioState st;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    sc = parse_scenario(doc);
    st = materialize_scenario(sc);
  } catch (const std::exception& e) {
    rr.exit_code = 2;
    rr.report["error"] = e.what();
    return rr;
  }

  const json analyses = doc.contains("analyses") ? doc.at("analyses") : json::array();
  std::vector<json> slots(analyses.size());
  std::vector<std::string> spectra(analyses.size());
  std::atomic<size_t> next{0};
  std::atomic<bool> any_failed{false};
  auto worker = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= analyses.size()) return;
      json rec;
      rec["index"] = int(i);
      try {
        std::string spectra_local;
        rec["analysis"] = detail::run_analysis(st, analyses[int(i)], &spectra_local);
        rec["status"] = "ok";
        spectra[i] = std::move(spectra_local);
      } catch (const std::exception& e) {
        rec["status"] = "error";
        rec["error"] = e.what();
        any_failed = true;
      }
      slots[i] = std::move(rec);
    }
  };
  const int nthreads = std::max(1, threads);
  if (nthreads == 1 || analyses.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  rr.report["scenario"] = doc;
  rr.report["version"] = kVersion;
  json recs = json::array();
  for (auto& s : slots) recs.push_back(std::move(s));
  rr.report["analyses"] = recs;

  // embedding growth reports are part of the deterministic payload
  json embeds = json::object();
  for (const auto& [id, rep] : st.embed_reports) embeds[id] = rep;
  rr.report["embeddings"] = embeds;

  // fit table for classification analyses
  rr.fits_csv = "net_id,alpha,sigma,log_c,k,sign,residual,saturated_count\n";
  for (const auto& rec : rr.report["analyses"]) {
    if (rec.value("status", "") != "ok") continue;
    const auto& a = rec.at("analysis");
    if (a.value("type", "") != "classify") continue;
    for (const auto& [alpha, fit] : a.at("result").at("per_alpha").items()) {
      const auto kj = fit.at("k");
      rr.fits_csv += csv_quote(a.at("net").get<std::string>()) + "," + alpha + "," +
                     format_double(sc.sigma) + "," + format_double(fit.at("log_c").get<double>()) +
                     "," + (kj.is_string() ? kj.get<std::string>() : format_double(kj.get<double>())) +
                     "," + std::to_string(fit.at("sign").get<int>()) + "," +
                     format_double(fit.at("residual").get<double>()) + "," +
                     std::to_string(fit.at("saturated").get<int>()) + "\n";
    }
  }
  for (const auto& s : spectra) rr.spectra_csv += s;
  if (!rr.spectra_csv.empty())
    rr.spectra_csv = "net_id,x0,bin,eps,xi_shell,magnitude,saturated\n" + rr.spectra_csv;

  const auto t1 = std::chrono::steady_clock::now();
  rr.meta["wall_seconds"] = std::chrono::duration<double>(t1 - t0).count();
  rr.meta["threads"] = nthreads;
  if (any_failed) rr.exit_code = 3;
  return rr;
}

}  // namespace ultraglab
