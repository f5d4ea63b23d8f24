#include <algorithm>
#include <cmath>
#include <sstream>

#include "lindchain/cli.hpp"
#include "lindchain/dynamics.hpp"
#include "lindchain/entanglement.hpp"
#include "lindchain/linalg.hpp"
#include "lindchain/luttinger.hpp"
#include "lindchain/oracle.hpp"
#include "lindchain/spectral.hpp"

namespace lindchain::cli {

namespace {

constexpr double kOracleTolerance = 1e-8;
constexpr double kGridEdge = 1e-12;

using Row = std::vector<Cell>;
using Rows = std::vector<Row>;

struct Point {
  int cells = 2;
  double lambda = 0.0;
  double eta = 0.0;
};

std::vector<Point> sweep_points(const RunConfig& c) {
  std::vector<Point> pts;
  for (int n : expand(c.cells)) {
    for (double l : expand(c.lambda)) {
      for (double e : expand(c.eta)) pts.push_back({n, l, e});
    }
  }
  return pts;
}

ModelSpec spec_at(const RunConfig& c, const Point& p) {
  ModelSpec s;
  s.n_cells = p.cells;
  s.lambda = p.lambda;
  s.eta = p.eta;
  s.boundary = c.boundary;
  s.orientation = c.orientation;
  s.validate();
  return s;
}

FillingRule filling_rule(const std::string& name) {
  return name == "all" ? FillingRule::all_filled : FillingRule::half_filling_real_band;
}

std::vector<double> time_grid(const RunConfig& c, double default_min, double default_max,
                              bool default_log = false) {
  const bool defaulted = !c.t_min && !c.t_max;
  const double lo = c.t_min.value_or(default_min);
  const double hi = c.t_max.value_or(default_max);
  const bool log = c.log_time || (defaulted && default_log);
  if (c.t_steps == 1) return {lo};
  if (!(hi > lo)) throw DomainError("time grid must be strictly increasing (t-max > t-min)");
  if (log && !(lo > 0.0)) throw DomainError("logarithmic time grid needs t-min > 0");
  std::vector<double> ts;
  for (int i = 0; i < c.t_steps; ++i) {
    const double f = static_cast<double>(i) / (c.t_steps - 1);
    if (i == c.t_steps - 1) ts.push_back(hi);
    else ts.push_back(log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
  }
  return ts;
}

std::vector<int> subsystem_sizes(const std::string& text, int n_sites) {
  std::vector<int> ls;
  if (text == "half") {
    ls = {n_sites / 2};
  } else if (text == "all") {
    for (int l = 1; l < n_sites; ++l) ls.push_back(l);
  } else if (text.find(':') != std::string::npos) {
    int a = 0, b = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(text);
    if (!(is >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || step < 1 || !is.eof()) {
      throw DomainError("sizes must be half | all | start:stop:step | l1,l2,...");
    }
    for (int l = a; l <= b; l += step) ls.push_back(l);
  } else {
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
      std::size_t used = 0;
      int l = 0;
      try {
        l = std::stoi(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != item.size()) throw DomainError("bad subsystem size '" + item + "'");
      ls.push_back(l);
    }
  }
  if (ls.empty()) throw DomainError("empty list of subsystem sizes");
  for (int l : ls) {
    if (l < 1 || l >= n_sites) {
      std::ostringstream os;
      os << "subsystem size " << l << " outside [1, " << n_sites << ")";
      throw DomainError(os.str());
    }
  }
  return ls;
}

std::vector<double> real_list(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) return expand(parse_real_range(text));
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) out.push_back(parse_real_range(item).start);
  if (out.empty()) throw DomainError("empty list");
  return out;
}

Cell real(double x) { return x; }
Cell integer(long long x) { return x; }
Cell text(std::string s) { return s; }

// S[t][l] for every requested time and subsystem size.
std::vector<std::vector<double>> entropy_grid(const ModelSpec& spec, FillingRule rule,
                                              const std::vector<double>& ts, const std::vector<int>& ls) {
  std::vector<std::vector<double>> S(ts.size(), std::vector<double>(ls.size()));
  if (spec.boundary == Boundary::periodic) {
    build_operators(spec);  // argument checks shared with the real-space path
    const BlochState s0 = bloch_initial_state(spec, rule);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const BlochState st = ts[i] > 0.0 ? propagate(s0, ts[i]) : s0;
      if (ls.size() > 4) {
        const CorrelationState C = to_real_space(st);
        for (std::size_t j = 0; j < ls.size(); ++j) S[i][j] = block_entropy(C, ls[j]);
      } else {
        for (std::size_t j = 0; j < ls.size(); ++j) {
          S[i][j] = gaussian_entropy(block_spectrum(bloch_reduced_block(st, ls[j])));
        }
      }
    }
    return S;
  }
  const OperatorSet ops = build_operators(spec);
  const CorrelationState c0 = prepare_initial_state(ops, rule);
  const Propagator prop(ops);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const CorrelationState ct = prop.evolve(c0, ts[i]);
    for (std::size_t j = 0; j < ls.size(); ++j) S[i][j] = block_entropy(ct, ls[j]);
  }
  return S;
}

std::vector<Complex> sorted(std::vector<Complex> v) {
  std::sort(v.begin(), v.end(), [](const Complex& a, const Complex& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

// ---- commands -----------------------------------------------------------------

Table cmd_params(const RunConfig& c) {
  Table t;
  t.columns = {"lambda", "eta", "w", "v", "gamma_A", "gamma_B", "gamma", "t1", "t2", "t1p", "t2p", "mu"};
  for (const Point& p : sweep_points(c)) {
    const DerivedParams d = derive_params(p.lambda, p.eta);
    t.rows.push_back({real(d.lambda), real(d.eta), real(d.w), real(d.v), real(d.gamma_A), real(d.gamma_B),
                      real(d.gamma), real(d.t1), real(d.t2), real(d.t1p), real(d.t2p), real(d.mu)});
  }
  return t;
}

Table cmd_spectrum(const RunConfig& c) {
  Table t;
  const bool dispersion = c.kind == "dispersion";
  t.columns = {"cells", "lambda", "eta", "index"};
  if (dispersion) t.columns.push_back("k");
  for (const char* col : {"re_value", "im_value", "phase", "gap_slow", "gap_fast"}) t.columns.push_back(col);

  const auto pts = sweep_points(c);
  const auto blocks = parallel_map<Rows>(pts.size(), c.threads, [&](std::size_t i) {
    const Point& p = pts[i];
    const ModelSpec spec = spec_at(c, p);
    const DerivedParams d = derive_params(p.lambda, p.eta);
    const std::string phase = to_string(classify_phase(p.lambda, p.eta, c.k_points));
    const GapReport gap = dispersion_gap(d, c.k_points);
    Rows rows;
    const auto emit = [&](long long idx, std::optional<double> k, Complex z) {
      Row r{integer(p.cells), real(p.lambda), real(p.eta), integer(idx)};
      if (k) r.push_back(real(*k));
      for (Cell cell : {real(z.real()), real(z.imag()), text(phase), real(gap.slow), real(gap.fast)}) {
        r.push_back(std::move(cell));
      }
      rows.push_back(std::move(r));
    };
    if (dispersion) {
      if (spec.boundary != Boundary::periodic) throw DomainError("dispersion needs --boundary periodic");
      long long idx = 0;
      for (double k : momentum_grid(spec.n_cells)) {
        const auto [plus, minus] = dispersion_pbc(d, k);
        emit(idx++, k, plus);
        emit(idx++, k, minus);
      }
      return rows;
    }
    std::vector<Complex> values;
    if (c.kind == "h_eff") {
      values = spectrum_numeric(effective_hamiltonian(spec));
    } else {
      const std::vector<Complex> damping = spectrum_numeric(build_operators(spec).D());
      if (c.kind == "damping") values = damping;
      else if (c.kind == "rapidities") values = rapidities(damping);
      else values = many_body_spectrum(rapidities(damping), c.max_excitations);
    }
    long long idx = 0;
    for (const Complex& z : sorted(values)) emit(idx++, std::nullopt, z);
    return rows;
  });
  for (const auto& b : blocks) t.rows.insert(t.rows.end(), b.begin(), b.end());
  return t;
}

Table cmd_phase_diagram(const RunConfig& c) {
  Table t;
  t.columns = {"lambda", "eta", "class", "gap_slow", "gap_fast"};
  const int g = c.grid;
  const auto axis = [g](int i) {
    if (i == 0) return kGridEdge;
    if (i == g - 1) return 1.0 - kGridEdge;
    return static_cast<double>(i) / (g - 1);
  };
  const auto rows = parallel_map<Row>(static_cast<std::size_t>(g) * g, c.threads, [&](std::size_t idx) {
    const double lambda = axis(static_cast<int>(idx) / g);
    const double eta = axis(static_cast<int>(idx) % g);
    const GapReport gap = dispersion_gap(derive_params(lambda, eta), c.k_points);
    return Row{real(lambda), real(eta), text(to_string(classify_phase(lambda, eta, c.k_points))),
               real(gap.slow), real(gap.fast)};
  });
  t.rows = rows;
  return t;
}

Table cmd_evolve(const RunConfig& c) {
  Table t;
  if (c.observable == "density") {
    t.columns = {"cells", "lambda", "eta", "t", "site", "density"};
  } else if (c.observable == "momentum") {
    t.columns = {"cells", "lambda", "eta", "t", "k", "n_total", "n_upper", "n_lower", "near_exceptional"};
  } else {
    t.columns = {"cells", "lambda", "eta", "t", "asymmetry"};
  }
  const auto pts = sweep_points(c);
  const auto ts = time_grid(c, 0.0, 10.0);
  const auto blocks = parallel_map<Rows>(pts.size(), c.threads, [&](std::size_t i) {
    const Point& p = pts[i];
    const ModelSpec spec = spec_at(c, p);
    const OperatorSet ops = build_operators(spec);
    const FillingRule rule = filling_rule(c.filling);
    Rows rows;
    const Row lead{integer(p.cells), real(p.lambda), real(p.eta)};
    if (c.observable == "density") {
      const CorrelationState c0 = prepare_initial_state(ops, rule);
      const Propagator prop(ops);
      for (double time : ts) {
        const auto n = density_real(prop.evolve(c0, time));
        for (std::size_t x = 0; x < n.size(); ++x) {
          Row r = lead;
          r.insert(r.end(), {real(time), integer(static_cast<long long>(x)), real(n[x])});
          rows.push_back(std::move(r));
        }
      }
      return rows;
    }
    const BlochState s0 = bloch_initial_state(spec, rule);
    for (double time : ts) {
      const auto occ = density_momentum(time > 0.0 ? propagate(s0, time) : s0);
      if (c.observable == "asymmetry") {
        Row r = lead;
        r.insert(r.end(), {real(time), real(momentum_asymmetry(occ))});
        rows.push_back(std::move(r));
        continue;
      }
      for (const auto& o : occ) {
        Row r = lead;
        r.insert(r.end(), {real(time), real(o.k), real(o.total), real(o.band_upper), real(o.band_lower),
                           integer(o.near_exceptional ? 1 : 0)});
        rows.push_back(std::move(r));
      }
    }
    return rows;
  });
  for (const auto& b : blocks) t.rows.insert(t.rows.end(), b.begin(), b.end());
  return t;
}

Table cmd_entropy(const RunConfig& c) {
  Table t;
  t.columns = {"cells", "lambda", "eta", "t", "l", "S"};
  const auto pts = sweep_points(c);
  const auto ts = time_grid(c, 0.0, 10.0);
  const auto blocks = parallel_map<Rows>(pts.size(), c.threads, [&](std::size_t i) {
    const Point& p = pts[i];
    const ModelSpec spec = spec_at(c, p);
    const auto ls = subsystem_sizes(c.sizes, spec.n_sites());
    const auto S = entropy_grid(spec, filling_rule(c.filling), ts, ls);
    Rows rows;
    for (std::size_t a = 0; a < ts.size(); ++a) {
      for (std::size_t b = 0; b < ls.size(); ++b) {
        rows.push_back({integer(p.cells), real(p.lambda), real(p.eta), real(ts[a]), integer(ls[b]), real(S[a][b])});
      }
    }
    return rows;
  });
  for (const auto& b : blocks) t.rows.insert(t.rows.end(), b.begin(), b.end());
  return t;
}

Table cmd_fit(const RunConfig& c) {
  Table t;
  const bool spatial = c.regime == "spatial";
  if (spatial) {
    t.columns = {"cells", "lambda", "eta", "t", "a", "b", "c", "residual_rms", "points"};
  } else {
    t.columns = {"cells", "lambda", "eta", "l", "regime", "A", "B", "rate", "gap_slow", "power", "r_squared",
                 "points"};
  }
  const auto pts = sweep_points(c);
  const auto blocks = parallel_map<Rows>(pts.size(), c.threads, [&](std::size_t i) {
    const Point& p = pts[i];
    const ModelSpec spec = spec_at(c, p);
    const FillingRule rule = filling_rule(c.filling);
    const int L = spec.n_sites();
    Rows rows;
    if (spatial) {
      std::vector<int> ls;
      for (int l = kSpatialFitMinL; l <= L - kSpatialFitMinL; ++l) ls.push_back(l);
      const auto ts = c.t_min || c.t_max ? time_grid(c, 0.0, 0.0) : std::vector<double>{0.0};
      const auto S = entropy_grid(spec, rule, ts, ls);
      for (std::size_t a = 0; a < ts.size(); ++a) {
        std::vector<EntropyRecord> recs;
        for (std::size_t b = 0; b < ls.size(); ++b) recs.push_back({ts[a], ls[b], S[a][b], std::nullopt});
        const SpatialFit f = fit_spatial(recs, L);
        rows.push_back({integer(p.cells), real(p.lambda), real(p.eta), real(ts[a]), real(f.a), real(f.b),
                        real(f.c), real(f.residual_rms), integer(f.points)});
      }
      return rows;
    }
    const double gap = dispersion_gap(derive_params(p.lambda, p.eta), std::max(c.k_points, 2 * p.cells)).slow;
    TemporalRegime regime = TemporalRegime::short_time;
    std::vector<double> ts;
    if (c.regime == "short_time") {
      ts = time_grid(c, 1e-3, 5e-2);
    } else if (c.regime == "long_time_gapped") {
      if (!(gap > 0.0)) throw DomainError("long_time_gapped fit needs a nonzero Liouvillian gap");
      regime = TemporalRegime::long_time_gapped;
      ts = time_grid(c, 5.0 / gap, 15.0 / gap);
    } else {
      regime = TemporalRegime::long_time_gapless;
      ts = time_grid(c, 1e2, 1e4, true);
    }
    for (int l : subsystem_sizes(c.sizes, L)) {
      const auto S = entropy_grid(spec, rule, ts, {l});
      std::vector<double> s;
      for (const auto& row : S) s.push_back(row[0]);
      double offset = 0.0;
      if (regime == TemporalRegime::short_time) offset = entropy_grid(spec, rule, {0.0}, {l})[0][0];
      const TemporalFit f = fit_temporal(ts, s, regime, offset);
      rows.push_back({integer(p.cells), real(p.lambda), real(p.eta), integer(l), text(c.regime), real(f.A),
                      real(f.B), real(f.rate), real(gap), real(f.power), real(f.r_squared), integer(f.points)});
    }
    return rows;
  });
  for (const auto& b : blocks) t.rows.insert(t.rows.end(), b.begin(), b.end());
  return t;
}

Table cmd_oracle(const RunConfig& c) {
  Table t;
  t.columns = {"cells", "lambda", "eta", "check", "filling", "max_error", "tolerance", "status"};
  const auto pts = sweep_points(c);
  const auto ts = time_grid(c, 0.0, 10.0);
  const bool all = c.check == "all";
  const auto blocks = parallel_map<Rows>(pts.size(), c.threads, [&](std::size_t i) {
    const Point& p = pts[i];
    const ModelSpec spec = spec_at(c, p);
    const FockLindbladSystem sys = jw_build(spec);
    const OperatorSet ops = build_operators(spec);
    Rows rows;
    const auto emit = [&](const char* check, const char* filling, double err, bool skipped) {
      const char* status = skipped ? "skipped" : (err <= kOracleTolerance ? "pass" : "fail");
      rows.push_back({integer(p.cells), real(p.lambda), real(p.eta), text(check), text(filling),
                      real(skipped ? 0.0 : err), real(kOracleTolerance), text(status)});
    };
    if (all || c.check == "correlator" || c.check == "entropy") {
      for (const char* filling : {"half", "all"}) {
        const CorrelationState c0 = prepare_initial_state(ops, filling_rule(filling));
        const auto rhos = lindblad_integrate(sys, slater_state(sys, c0.C), ts);
        double c_err = 0.0;
        double s_err = 0.0;
        for (std::size_t k = 0; k < ts.size(); ++k) {
          const CorrelationState ct = propagate(c0, ops, ts[k]);
          c_err = std::max(c_err, (ct.C - correlation_from_rho(sys, rhos[k])).cwiseAbs().maxCoeff());
          for (int l = 1; l < spec.n_sites(); ++l) {
            const double exact = von_neumann_entropy(reduce_to_left(rhos[k], spec.n_sites(), l));
            s_err = std::max(s_err, std::abs(block_entropy(ct, l) - exact));
          }
        }
        if (all || c.check == "correlator") emit("correlator", filling, c_err, false);
        if (all || c.check == "entropy") emit("entropy", filling, s_err, false);
      }
    }
    if (all || c.check == "spectrum") {
      if (spec.n_cells > kMaxSpectrumCells) {
        emit("spectrum", "-", 0.0, true);
      } else {
        const auto exact = superoperator_spectrum(sys);
        const auto built = many_body_spectrum(rapidities(spectrum_numeric(ops.D())), std::nullopt,
                                              ManyBodyRule::independent_subsets, 0.0);
        emit("spectrum", "-", multiset_distance(exact, built), false);
      }
    }
    return rows;
  });
  for (const auto& b : blocks) t.rows.insert(t.rows.end(), b.begin(), b.end());
  return t;
}

Table cmd_luttinger(const RunConfig& c) {
  Table t;
  t.columns = {"t", "q", "re_u", "im_u", "re_v_coef", "im_v_coef", "n", "s", "S_total", "decay_factor",
               "outside_validity", "re_u_exact", "im_u_exact", "re_v_exact", "im_v_exact"};
  LuttingerParams lp;
  lp.v = c.v;
  lp.g2 = c.g2;
  lp.gamma = c.gamma;
  lp.q_grid = real_list(c.q);
  lp.t_grid = time_grid(c, 1e-4, 1e-2, true);
  lp.validate();
  std::vector<std::vector<EomSample>> exact;
  for (double q : lp.q_grid) exact.push_back(eom_integrate(lp, q));
  for (std::size_t a = 0; a < lp.t_grid.size(); ++a) {
    std::vector<BogoliubovPair> pairs;
    for (double q : lp.q_grid) pairs.push_back(bogoliubov_short_time(lp, q, lp.t_grid[a]));
    const MseeResult m = msee_short_time(pairs);
    for (std::size_t b = 0; b < pairs.size(); ++b) {
      const auto& pr = pairs[b];
      const auto& ex = exact[b][a];
      t.rows.push_back({real(pr.t), real(pr.q), real(pr.u.real()), real(pr.u.imag()), real(pr.v_coef.real()),
                        real(pr.v_coef.imag()), real(std::norm(pr.v_coef)), real(m.per_mode[b]), real(m.S),
                        real(m.decay_factor), integer(pr.outside_validity ? 1 : 0), real(ex.u().real()),
                        real(ex.u().imag()), real(ex.v().real()), real(ex.v().imag())});
    }
  }
  return t;
}

}  // namespace

Table execute(const RunConfig& c) {
  validate(c);
  switch (c.command) {
    case Command::params: return cmd_params(c);
    case Command::spectrum: return cmd_spectrum(c);
    case Command::phase_diagram: return cmd_phase_diagram(c);
    case Command::evolve: return cmd_evolve(c);
    case Command::entropy: return cmd_entropy(c);
    case Command::fit: return cmd_fit(c);
    case Command::oracle: return cmd_oracle(c);
    case Command::luttinger: return cmd_luttinger(c);
  }
  throw DomainError("unknown command");
}

}  // namespace lindchain::cli
