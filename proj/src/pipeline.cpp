#include "cylspec/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>

#include "cylspec/error.hpp"

namespace cylspec {

namespace {

double frobenius(const std::vector<Complex>& m) {
  double s = 0.0;
  for (const Complex& v : m) s += std::norm(v);
  return std::sqrt(s);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io_error, "cannot create output directory: " + dir);
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

double front_step(const RunConfig& cfg) {
  return 2.0 * cfg.z_extent / (cfg.nz - 1);
}

// Union of per-shift results with near-duplicates collapsed onto the copy
// with the smaller residual.
EigenResult merge_results(const std::vector<EigenResult>& runs) {
  EigenResult merged;
  int total_iters = 0;
  for (const EigenResult& r : runs) {
    merged.solver = r.solver;
    total_iters += r.solver.iterations;
    for (const EigenPair& p : r.pairs) {
      bool duplicate = false;
      for (EigenPair& q : merged.pairs) {
        double scale = std::max(1.0, std::abs(q.lambda));
        if (std::abs(q.lambda - p.lambda) <= 1e-7 * scale) {
          duplicate = true;
          if (p.residual < q.residual) q = p;
          break;
        }
      }
      if (!duplicate) merged.pairs.push_back(p);
    }
  }
  merged.solver.iterations = total_iters;
  std::sort(merged.pairs.begin(), merged.pairs.end(),
            [](const EigenPair& a, const EigenPair& b) {
              if (a.lambda.real() != b.lambda.real())
                return a.lambda.real() > b.lambda.real();
              return a.lambda.imag() < b.lambda.imag();
            });
  return merged;
}

Json dispersion_json(const DispersionOutcome& d) {
  Json pts = Json::array();
  for (std::size_t i = 0; i < d.check.computed.size(); ++i)
    pts.push_back(Json{{"re", d.check.computed[i].real()},
                       {"im", d.check.computed[i].imag()},
                       {"nearest_re", d.check.nearest[i].real()},
                       {"nearest_im", d.check.nearest[i].imag()},
                       {"distance", std::abs(d.check.computed[i] - d.check.nearest[i])}});
  return Json{{"max_distance", d.check.max_distance}, {"points", pts}};
}

Json decay_outcome_json(const RunConfig& cfg, const DecayOutcome& d) {
  Json j = decay_json(d.fit, d.fit.delta_hat > 0.5 * std::abs(cfg.speed));
  j["lambda0"] = complex_json(d.lambda0);
  j["lambda0_residual"] = d.lambda0_residual;
  j["window"] = Json{{"lo", d.window_lo}, {"hi", d.window_hi}};
  j["alpha_star"] = d.bound.alpha_star;
  j["decay_bound"] = d.bound.bound;
  j["nu"] = d.nu;
  j["M"] = d.big_m;
  return j;
}

}  // namespace

Instance build_instance(const RunConfig& cfg) {
  Instance inst;
  inst.f = Nonlinearity::cubic(cfg.a);
  if (cfg.potential_kind == "front") {
    FrontProfile front = exact_front(cfg.a, -cfg.z_extent, cfg.z_extent, front_step(cfg));
    inst.speed = cfg.speed_set ? cfg.speed : front.speed;
    inst.V = front_fiber_potential(inst.f, front,
                                   linspace(-cfg.z_extent, cfg.z_extent, cfg.nz));
  } else if (cfg.potential_kind == "synthetic") {
    StandingWaveProfile wave = periodic_wave(inst.f, cfg.wave_length);
    inst.speed = cfg.speed;
    inst.V = synth_example_potential(inst.f, wave, cfg.alpha, cfg.nx, cfg.bc_x,
                                     linspace(-cfg.z_extent, cfg.z_extent, cfg.nz));
  } else {
    inst.V = read_potential_json(cfg.potential_file);
    inst.speed = cfg.speed;
  }
  inst.plus = limit_spectrum(inst.V, '+');
  inst.minus = limit_spectrum(inst.V, '-');
  inst.essential = dispersion_curves(inst.plus, inst.minus, inst.speed,
                                     default_s_max(inst.plus, inst.minus), 401);
  return inst;
}

EigsOutcome run_eigs(const RunConfig& cfg, const Instance& inst) {
  EigsOutcome out;
  out.op = assemble_cylinder(inst.V, inst.speed, cfg.bc_z);
  for (const Complex& shift : cfg.shifts)
    out.runs.push_back(eig_general(out.op, cfg.k, shift, cfg.residual_tol, cfg.seed));
  out.merged = merge_results(out.runs);

  // Independent comparison spectrum: the operator is symmetric for c = 0;
  // otherwise the diagonal similarity applies on Dirichlet ends when the
  // one-sided couplings stay positive.
  if (inst.speed == 0.0 && cfg.bc_z == Bc::dirichlet) {
    out.sym_compared = true;
    for (const Complex& shift : cfg.shifts) {
      EigenResult r = eig_symmetric(out.op, cfg.k + 2, shift.real(),
                                    cfg.residual_tol, cfg.seed);
      for (const EigenPair& p : r.pairs) out.sym_eigs.push_back(p.lambda.real());
    }
  } else if (cfg.bc_z == Bc::dirichlet &&
             std::abs(inst.speed) * out.op.hz < 2.0) {
    DiscreteOperator sym = symmetrize(out.op);
    out.sym_compared = true;
    for (const Complex& shift : cfg.shifts) {
      EigenResult r = eig_symmetric(sym, cfg.k + 2, shift.real(),
                                    cfg.residual_tol, cfg.seed);
      for (const EigenPair& p : r.pairs) out.sym_eigs.push_back(p.lambda.real());
    }
  }
  std::sort(out.sym_eigs.begin(), out.sym_eigs.end(), std::greater<double>());
  out.sym_eigs.erase(std::unique(out.sym_eigs.begin(), out.sym_eigs.end(),
                                 [](double a, double b) {
                                   return std::abs(a - b) <=
                                          1e-7 * std::max(1.0, std::abs(a));
                                 }),
                     out.sym_eigs.end());

  out.realness = verify_realness(out.merged, out.sym_eigs,
                                 inst.essential.sup_re, 1e-8);
  return out;
}

DecayOutcome run_decay(const RunConfig& cfg, const Instance& inst,
                       const EigsOutcome& eigs) {
  DecayOutcome out;
  const double sup = inst.essential.sup_re;
  const EigenPair* chosen = nullptr;
  double best = std::numeric_limits<double>::infinity();
  for (const EigenPair& p : eigs.merged.pairs) {
    if (p.lambda.real() <= sup) continue;
    double d = std::abs(p.lambda - cfg.shifts.front());
    if (d < best) {
      best = d;
      chosen = &p;
    }
  }
  if (!chosen)
    throw Error(ErrorKind::not_right_of_essential,
                "run_decay: no computed eigenvalue lies right of the essential spectrum");
  out.lambda0 = chosen->lambda;
  out.lambda0_residual = chosen->residual;

  const int m = std::min<int>(cfg.modes, static_cast<int>(inst.plus.vectors.size()));
  Trajectory full = project_trajectory(chosen->vec, inst.V, inst.plus,
                                       inst.speed, m);
  int begin = 0;
  while (begin < full.steps() && full.z[static_cast<std::size_t>(begin)] < -1e-12)
    ++begin;
  if (full.steps() - begin < 3)
    throw Error(ErrorKind::grid_too_short, "run_decay: forward ray has fewer than 3 points");
  out.ray = slice_trajectory(full, begin, full.steps());

  if (std::isnan(cfg.fit_lo)) {
    auto [lo, hi] = default_fit_window(out.ray.z.front(), out.ray.z.back());
    out.window_lo = lo;
    out.window_hi = hi;
  } else {
    out.window_lo = cfg.fit_lo;
    out.window_hi = cfg.fit_hi;
  }
  out.fit = fit_decay(out.ray.z, out.ray.norms, out.window_lo, out.window_hi);
  out.bound = decay_bound(out.lambda0, inst.speed, sup);

  std::vector<double> mu(inst.plus.eigenvalues.begin(),
                         inst.plus.eigenvalues.begin() + m);
  BiSemigroupRealization bs = build_bisemigroup(mu, out.lambda0, inst.speed);
  out.nu = bs.nu;
  out.big_m = std::max(1.0, frobenius(bs.w) * frobenius(bs.w_inv));

  BNormCurves curves = bnorm_curve(inst.V);
  std::vector<double> f_ray(curves.g_plus.begin() + begin, curves.g_plus.end());
  out.gronwall = gronwall_verify(out.ray.z, out.ray.norms, out.nu, out.big_m, f_ray);
  return out;
}

DispersionOutcome run_dispersion(const RunConfig& cfg, const Instance& inst) {
  DispersionOutcome out;
  const int nz = cfg.dispersion_nz;
  const double hz = cfg.period / nz;  // half-open periodic cell
  CylinderPotential& Vc = out.constant;
  Vc.omega_dim = inst.V.omega_dim;
  Vc.bc_x = inst.V.bc_x;
  Vc.x_length = inst.V.x_length;
  Vc.x = inst.V.x;
  Vc.z.resize(static_cast<std::size_t>(nz));
  for (int iz = 0; iz < nz; ++iz) Vc.z[static_cast<std::size_t>(iz)] = iz * hz;
  const int nx = Vc.nx();
  Vc.values.resize(static_cast<std::size_t>(nx) * nz);
  for (int ix = 0; ix < nx; ++ix)
    for (int iz = 0; iz < nz; ++iz)
      Vc.values[static_cast<std::size_t>(ix) * nz + iz] =
          inst.V.v_plus[static_cast<std::size_t>(ix)];
  Vc.v_plus = inst.V.v_plus;
  Vc.v_minus = inst.V.v_plus;
  out.check = dispersion_check(Vc, inst.speed, cfg.k, cfg.shifts.front(), cfg.seed);
  return out;
}

void cmd_wave(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  Nonlinearity f = Nonlinearity::cubic(cfg.a);
  if (cfg.wave_kind == "periodic") {
    StandingWaveProfile wave = periodic_wave(f, cfg.wave_length);
    double resid = wave_ode_residual(wave, f);
    if (cfg.wants("csv"))
      write_csv(join(cfg.out_dir, "wave.csv"), {"x", "w", "dw"},
                {wave.x, wave.w, wave.dw});
    if (cfg.wants("json"))
      write_json_file(join(cfg.out_dir, "wave.json"),
                      Json{{"kind", "periodic"},
                           {"a", cfg.a},
                           {"period", wave.period},
                           {"energy", wave.energy},
                           {"w_minus", wave.w_minus},
                           {"w_plus", wave.w_plus},
                           {"min_period", min_period(f)},
                           {"residual", resid}});
  } else {
    FrontProfile front = exact_front(cfg.a, -cfg.z_extent, cfg.z_extent, front_step(cfg));
    double resid = front_ode_residual(front, f);
    if (cfg.wants("csv"))
      write_csv(join(cfg.out_dir, "wave.csv"), {"z", "u", "du"},
                {front.z, front.u, front.du});
    if (cfg.wants("json"))
      write_json_file(join(cfg.out_dir, "wave.json"),
                      Json{{"kind", "front"},
                           {"a", cfg.a},
                           {"speed", front.speed},
                           {"u_minus", front.u_minus},
                           {"u_plus", front.u_plus},
                           {"residual", resid}});
  }
}

void cmd_essential(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  Instance inst = build_instance(cfg);
  if (cfg.wants("csv")) {
    std::vector<double> branch, side, mu, s, re, im;
    int index = 0;
    for (const DispersionBranch& b : inst.essential.branches) {
      if (b.sampled)
        for (std::size_t i = 0; i < b.s.size(); ++i) {
          branch.push_back(index);
          side.push_back(b.side == '+' ? 1.0 : -1.0);
          mu.push_back(b.mu);
          s.push_back(b.s[i]);
          re.push_back(b.lambda[i].real());
          im.push_back(b.lambda[i].imag());
        }
      ++index;
    }
    write_csv(join(cfg.out_dir, "essential_curves.csv"),
              {"branch", "side", "mu", "s", "re", "im"},
              {branch, side, mu, s, re, im});
  }
  if (cfg.wants("json"))
    write_json_file(join(cfg.out_dir, "essential.json"),
                    essential_json(inst.essential));
  if (cfg.wants("svg"))
    write_svg_spectrum(join(cfg.out_dir, "essential.svg"), inst.essential, {});
}

void cmd_eigs(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  Instance inst = build_instance(cfg);
  EigsOutcome out = run_eigs(cfg, inst);
  if (cfg.wants("json")) {
    Json runs = Json::array();
    for (const EigenResult& r : out.runs) runs.push_back(eigen_result_json(r));
    write_json_file(join(cfg.out_dir, "eigs.json"),
                    Json{{"essential", essential_json(inst.essential)},
                         {"runs", runs},
                         {"merged", eigen_result_json(out.merged)},
                         {"sym_compared", out.sym_compared},
                         {"sym_eigs", out.sym_eigs}});
    write_json_file(join(cfg.out_dir, "realness.json"), realness_json(out.realness));
  }
  if (cfg.wants("csv")) {
    std::vector<double> re, im, resid;
    for (const EigenPair& p : out.merged.pairs) {
      re.push_back(p.lambda.real());
      im.push_back(p.lambda.imag());
      resid.push_back(p.residual);
    }
    write_csv(join(cfg.out_dir, "eigenvalues.csv"), {"re", "im", "residual"},
              {re, im, resid});
  }
  if (cfg.wants("svg")) {
    std::vector<Complex> lams;
    for (const EigenPair& p : out.merged.pairs) lams.push_back(p.lambda);
    write_svg_spectrum(join(cfg.out_dir, "spectrum.svg"), inst.essential, lams);
  }
  if (cfg.wants("mtx"))
    write_matrix_market(join(cfg.out_dir, "operator.mtx"), out.op);
}

void cmd_decay(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  Instance inst = build_instance(cfg);
  EigsOutcome eigs = run_eigs(cfg, inst);
  DecayOutcome out = run_decay(cfg, inst, eigs);
  if (cfg.wants("json")) {
    write_json_file(join(cfg.out_dir, "decay.json"), decay_outcome_json(cfg, out));
    write_json_file(join(cfg.out_dir, "gronwall.json"), gronwall_json(out.gronwall));
  }
  if (cfg.wants("csv"))
    write_csv(join(cfg.out_dir, "decay_norms.csv"), {"z", "norm"},
              {out.ray.z, out.ray.norms});
  if (cfg.wants("svg"))
    write_svg_decay(join(cfg.out_dir, "decay.svg"), out.ray.z, out.ray.norms);
}

void cmd_dispersion_check(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  Instance inst = build_instance(cfg);
  DispersionOutcome out = run_dispersion(cfg, inst);
  if (cfg.wants("json"))
    write_json_file(join(cfg.out_dir, "dispersion.json"), dispersion_json(out));
  if (cfg.wants("csv")) {
    std::vector<double> re, im, dist;
    for (std::size_t i = 0; i < out.check.computed.size(); ++i) {
      re.push_back(out.check.computed[i].real());
      im.push_back(out.check.computed[i].imag());
      dist.push_back(std::abs(out.check.computed[i] - out.check.nearest[i]));
    }
    write_csv(join(cfg.out_dir, "dispersion.csv"), {"re", "im", "distance"},
              {re, im, dist});
  }
}

void cmd_hypotheses(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  Instance inst = build_instance(cfg);
  HypothesisReport rep = check_hypotheses(inst.V, cfg.hypothesis_tol);
  if (cfg.wants("json"))
    write_json_file(join(cfg.out_dir, "hypotheses.json"), hypothesis_json(rep));
  if (cfg.wants("csv"))
    write_csv(join(cfg.out_dir, "hypothesis_curves.csv"),
              {"z", "g_plus", "g_minus"}, {inst.V.z, rep.g_plus, rep.g_minus});
  if (!rep.pass())
    throw Error(ErrorKind::hypothesis_failure,
                "tail hypotheses fail at tolerance " + std::to_string(cfg.hypothesis_tol));
}

Json build_report(const RunConfig& cfg) {
  Instance inst = build_instance(cfg);
  HypothesisReport hyp = check_hypotheses(inst.V, cfg.hypothesis_tol);
  EigsOutcome eigs = run_eigs(cfg, inst);
  DispersionOutcome disp = run_dispersion(cfg, inst);

  Json report{
      {"config",
       Json{{"a", cfg.a},
            {"wave_kind", cfg.wave_kind},
            {"potential_kind", cfg.potential_kind},
            {"speed", inst.speed},
            {"nx", inst.V.nx()},
            {"nz", inst.V.nz()},
            {"bc_x", bc_name(inst.V.bc_x)},
            {"bc_z", bc_name(cfg.bc_z)},
            {"k", cfg.k},
            {"seed", cfg.seed}}},
      {"hypotheses", hypothesis_json(hyp)},
      {"sturm", Json{{"sup_plus", inst.plus.sup()}, {"sup_minus", inst.minus.sup()}}},
      {"essential", essential_json(inst.essential)},
      {"dispersion", dispersion_json(disp)},
      {"eigs", eigen_result_json(eigs.merged)},
      {"sym_compared", eigs.sym_compared},
      {"realness", realness_json(eigs.realness)}};
  try {
    DecayOutcome dec = run_decay(cfg, inst, eigs);
    report["decay"] = decay_outcome_json(cfg, dec);
    report["gronwall"] = gronwall_json(dec.gronwall);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::not_right_of_essential) throw;
    report["decay"] = nullptr;
    report["gronwall"] = nullptr;
    report["decay_skipped"] = e.what();
  }
  return report;
}

void cmd_report(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  using Clock = std::chrono::steady_clock;
  auto t0 = Clock::now();
  Json report = build_report(cfg);
  auto t1 = Clock::now();
  write_json_file(join(cfg.out_dir, "report.json"), report);
  Json timings{{"report_seconds",
                std::chrono::duration<double>(t1 - t0).count()}};
  write_json_file(join(cfg.out_dir, "timings.json"), timings);

  if (cfg.wants("svg")) {
    Instance inst = build_instance(cfg);
    std::vector<Complex> lams;
    for (const Json& p : report["eigs"]["pairs"])
      lams.emplace_back(p["re"].get<double>(), p["im"].get<double>());
    write_svg_spectrum(join(cfg.out_dir, "spectrum.svg"), inst.essential, lams);
  }
}

}  // namespace cylspec
