#include "inls/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "inls/corpus.hpp"
#include "inls/errors.hpp"
#include "inls/highlow.hpp"
#include "inls/io.hpp"
#include "inls/solver.hpp"

namespace inls {

namespace {

namespace fs = std::filesystem;

struct CommonOpts {
  int n = 1, m = 512;
  double L = 10.0;
  double alpha = 1.0, b = 0.1;
  int mu = -1;
  std::optional<double> p, N;
  double dt = 1e-3, T = 1.0, horizon = 0.0;
  int blocks = 0;  // 0: family default
  int substeps = 64, max_iters = 25;
  double contraction_tol = 1e-10;
  double contraction_C = 1.0, C_split = 1.0, blowup_threshold = 1e3;
  std::string monitors = "mass,energy,ynorm";
  bool linear_only = false;
  bool hard_cap_weight = false;
  std::uint64_t seed = 2024;
  std::string outdir = ".";
  std::string init = "gaussian:amp=1,width=1,x0=0,k0=0";
  std::string config_file;
  // subcommand-specific knobs, carried in the manifest so replay is faithful
  std::string method = "splitstep";
  std::string dump_times;
  std::string exponent_list = "2,2,0;3,1.5,0;4,1.3333333333333333,0";
  bool auto_escalate = false;
  std::optional<double> T_candidate;
};

/// Tracks files written by a run so failures can clean up partial outputs.
class OutputSet {
public:
  explicit OutputSet(std::string outdir) : outdir_(std::move(outdir)) {
    fs::create_directories(outdir_);
  }
  std::string path(const std::string& rel) {
    written_.push_back(rel);
    return (fs::path(outdir_) / rel).string();
  }
  void discard_all() {
    for (const auto& rel : written_) {
      std::error_code ec;
      fs::remove(fs::path(outdir_) / rel, ec);
    }
  }
  std::vector<std::pair<std::string, std::string>> checksums() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& rel : written_)
      out.emplace_back(rel, file_checksum((fs::path(outdir_) / rel).string()));
    return out;
  }
  const std::string& dir() const { return outdir_; }

private:
  std::string outdir_;
  std::vector<std::string> written_;
};

ProblemParams problem_of(const CommonOpts& o) {
  ProblemParams pp;
  pp.n = o.n;
  pp.alpha = o.alpha;
  pp.b = o.b;
  pp.mu = o.mu;
  pp.p = o.p;
  pp.N = o.N;
  return pp;
}

SolverConfig solver_of(const CommonOpts& o) {
  SolverConfig cfg;
  cfg.params = problem_of(o);
  cfg.dt = o.dt;
  cfg.T = o.T;
  cfg.picard.substeps = o.substeps;
  cfg.picard.max_iters = o.max_iters;
  cfg.picard.contraction_tol = o.contraction_tol;
  cfg.blowup_threshold = o.blowup_threshold;
  cfg.monitors.mass = o.monitors.find("mass") != std::string::npos;
  cfg.monitors.energy = o.monitors.find("energy") != std::string::npos;
  cfg.monitors.ynorm = o.monitors.find("ynorm") != std::string::npos;
  cfg.linear_only = o.linear_only;
  cfg.weight_mode = o.hard_cap_weight ? SingularWeight::Regularization::HardCap
                                      : SingularWeight::Regularization::CellAverage;
  cfg.contraction_C = o.contraction_C;
  return cfg;
}

WindowFamily family_of(const CommonOpts& o, const GridSpec& g) {
  return o.blocks > 0 ? WindowFamily(g, o.blocks) : WindowFamily::with_defaults(g);
}

SpectralField initial_field(const CommonOpts& o, const GridSpec& g) {
  const std::string& spec = o.init;
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "corpus") return corpus_member(g, std::stoi(rest));
  if (kind == "file") return read_field(rest);
  if (kind == "random") return random_field(g, o.seed);
  if (kind != "gaussian") throw std::invalid_argument("unknown init spec: " + spec);
  double amp = 1, width = 1, x0 = 0, k0 = 0;
  std::stringstream ss(rest);
  std::string kv;
  while (std::getline(ss, kv, ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = kv.substr(0, eq);
    const double val = std::stod(kv.substr(eq + 1));
    if (key == "amp") amp = val;
    else if (key == "width") width = val;
    else if (key == "x0") x0 = val;
    else if (key == "k0") k0 = val;
    else throw std::invalid_argument("unknown gaussian parameter: " + key);
  }
  CVec v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double x, y;
    g.coords(i, x, y);
    const double dx = x - x0;
    v[i] = amp * std::exp(-(dx * dx + y * y) / (width * width)) * std::polar(1.0, k0 * x);
  }
  return SpectralField::from_physical(g, v);
}

std::map<std::string, std::string> effective_config(const CommonOpts& o) {
  std::map<std::string, std::string> c;
  c["n"] = std::to_string(o.n);
  c["m"] = std::to_string(o.m);
  c["L"] = format_float(o.L);
  c["alpha"] = format_float(o.alpha);
  c["b"] = format_float(o.b);
  c["mu"] = std::to_string(o.mu);
  if (o.p) c["p"] = format_float(*o.p);
  if (o.N) c["N"] = format_float(*o.N);
  c["dt"] = format_float(o.dt);
  c["T"] = format_float(o.T);
  c["horizon"] = format_float(o.horizon);
  c["blocks"] = std::to_string(o.blocks);
  c["substeps"] = std::to_string(o.substeps);
  c["max_iters"] = std::to_string(o.max_iters);
  c["contraction_tol"] = format_float(o.contraction_tol);
  c["monitors"] = o.monitors;
  c["contraction_C"] = format_float(o.contraction_C);
  c["C_split"] = format_float(o.C_split);
  c["blowup_threshold"] = format_float(o.blowup_threshold);
  c["linear_only"] = o.linear_only ? "1" : "0";
  c["weight_mode"] = o.hard_cap_weight ? "hard-cap" : "cell-average";
  c["seed"] = std::to_string(o.seed);
  c["init"] = o.init;
  c["method"] = o.method;
  if (!o.dump_times.empty()) c["dump-at"] = o.dump_times;
  c["exponents"] = o.exponent_list;
  c["auto_escalate"] = o.auto_escalate ? "1" : "0";
  if (o.T_candidate) c["T-candidate"] = format_float(*o.T_candidate);
  return c;
}

void finish_manifest(const std::string& sub, const CommonOpts& o, OutputSet& outs,
                     std::chrono::steady_clock::time_point t0) {
  RunManifest m;
  m.subcommand = sub;
  m.config = effective_config(o);
  m.seed = o.seed;
  if (o.init.rfind("file:", 0) == 0) m.inputs.push_back(o.init.substr(5));
  m.outputs = outs.checksums();
  m.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.write((fs::path(outs.dir()) / "manifest.json").string());
}

std::string ledger_csv(const Trajectory& traj) {
  std::string csv = "t,mass,energy,lp_alpha2,linf\n";
  for (const auto& r : traj.ledger)
    csv += csv_row({format_float(r.t), format_float(r.mass), format_float(r.energy),
                    format_float(r.lp_alpha2), format_float(r.linf)});
  return csv;
}

int cmd_exponents(const CommonOpts& o, bool table) {
  NormInputs norms;  // CLI surfaces only the parameter calculus; norms via flags
  ExponentReport rep = derive_all(problem_of(o), norms, o.contraction_C, o.T_candidate);
  auto t0 = std::chrono::steady_clock::now();
  OutputSet outs(o.outdir);
  write_text_file(outs.path("exponents.json"), rep.to_json() + "\n");
  std::cout << rep.to_json() << "\n";
  if (table) std::cout << rep.to_table();
  finish_manifest("exponents", o, outs, t0);
  return 0;
}

int cmd_simulate(const CommonOpts& o) {
  const std::string& method = o.method;
  const std::string& dump_times = o.dump_times;
  auto t0 = std::chrono::steady_clock::now();
  GridSpec g = make_grid(o.n, o.m, o.L);
  SpectralField u0 = initial_field(o, g);
  SolverConfig cfg = solver_of(o);

  // Exponent preamble for every PDE run.
  WindowFamily wf = family_of(o, g);
  NormInputs norms;
  norms.data_l2_plus_mod = data_norm_proxy(u0, o.alpha, wf);
  ExponentReport rep = derive_all(cfg.params, norms, o.contraction_C);
  std::cout << rep.to_table();

  OutputSet outs(o.outdir);
  try {
    Trajectory traj;
    if (method == "picard") {
      auto [t, hist] = picard_solve(u0, cfg);
      traj = std::move(t);
      std::string hist_csv = "iteration,difference,ratio\n";
      for (std::size_t i = 0; i < hist.differences.size(); ++i)
        hist_csv += csv_row({std::to_string(i + 1), format_float(hist.differences[i]),
                             i > 0 ? format_float(hist.ratios[i - 1]) : "nan"});
      write_text_file(outs.path("contraction.csv"), hist_csv);
    } else {
      traj = splitstep_solve(u0, cfg);
    }
    write_text_file(outs.path("ledger.csv"), ledger_csv(traj));
    if (!dump_times.empty()) {
      std::stringstream ss(dump_times);
      std::string tok;
      int idx = 0;
      while (std::getline(ss, tok, ',')) {
        const double t = std::stod(tok);
        write_field(outs.path("field_" + std::to_string(idx++) + ".dump"), traj.at_time(t, cfg.dt));
      }
    }
    finish_manifest("simulate", o, outs, t0);
    if (traj.blowup) {
      std::cout << "blow-up flagged at t = " << format_float(traj.blowup_time) << "\n";
      return 3;
    }
  } catch (...) {
    outs.discard_all();
    throw;
  }
  return 0;
}

int cmd_norms(const CommonOpts& o) {
  const std::string& exponent_list = o.exponent_list;
  auto t0 = std::chrono::steady_clock::now();
  GridSpec g = make_grid(o.n, o.m, o.L);
  WindowFamily wf = family_of(o, g);
  SpectralField gw = gaussian_window(g);

  std::vector<ModulationParams> sets;
  std::stringstream ss(exponent_list);
  std::string tok;
  while (std::getline(ss, tok, ';')) {
    std::stringstream ts(tok);
    std::string a, b, c;
    std::getline(ts, a, ',');
    std::getline(ts, b, ',');
    std::getline(ts, c, ',');
    sets.push_back({std::stod(a), std::stod(b), c.empty() ? 0.0 : std::stod(c)});
  }

  OutputSet outs(o.outdir);
  try {
    std::string csv = "function_id,p,q,s,mod_norm,stft_norm,lp_norm\n";
    for (int id = 0; id < kCorpusSize; ++id) {
      SpectralField f = corpus_member(g, id);
      for (const auto& mp : sets) {
        csv += csv_row({std::to_string(id), format_float(mp.p), format_float(mp.q),
                        format_float(mp.s), format_float(mod_norm(f, mp, wf)),
                        format_float(stft_norm(f, mp, gw, wf)), format_float(lp_norm(f, mp.p))});
      }
    }
    write_text_file(outs.path("norms.csv"), csv);
    finish_manifest("norms", o, outs, t0);
  } catch (...) {
    outs.discard_all();
    throw;
  }
  return 0;
}

int cmd_split(const CommonOpts& o) {
  auto t0 = std::chrono::steady_clock::now();
  if (!o.p || !o.N) throw HypothesisError({"split requires --p and --N"});
  GridSpec g = make_grid(o.n, o.m, o.L);
  WindowFamily wf = family_of(o, g);
  SpectralField u = initial_field(o, g);
  SplitResult sr = split(u, *o.N, problem_of(o), wf, o.C_split);

  OutputSet outs(o.outdir);
  try {
    nlohmann::json j;
    j["N"] = sr.N;
    j["tau"] = sr.tau;
    j["data_mod_norm"] = sr.data_mod_norm;
    j["achieved_phi_l2"] = sr.achieved_phi_l2;
    j["achieved_psi_mod"] = sr.achieved_psi_mod;
    j["target_phi"] = sr.target_phi;
    j["target_psi"] = sr.target_psi;
    j["trivial_high"] = sr.trivial_high;
    j["trivial_low"] = sr.trivial_low;
    write_text_file(outs.path("split.json"), j.dump(2) + "\n");
    write_field(outs.path("phi.dump"), sr.phi);
    write_field(outs.path("psi.dump"), sr.psi);
    std::cout << j.dump(2) << "\n";
    finish_manifest("split", o, outs, t0);
  } catch (...) {
    outs.discard_all();
    throw;
  }
  return 0;
}

int cmd_global_run(const CommonOpts& o) {
  const bool auto_escalate = o.auto_escalate;
  auto t0 = std::chrono::steady_clock::now();
  if (!o.p || !o.N) throw HypothesisError({"global-run requires --p and --N"});
  GridSpec g = make_grid(o.n, o.m, o.L);
  WindowFamily wf = family_of(o, g);
  SpectralField u0 = initial_field(o, g);
  SolverConfig cfg = solver_of(o);
  const double horizon = o.horizon > 0 ? o.horizon : o.T;

  OutputSet outs(o.outdir);
  try {
    GlobalRunResult res = global_run(u0, *o.N, horizon, cfg, wf, o.C_split, auto_escalate);
    std::cout << res.report.to_table();
    std::string csv =
        "k,T,phi_l2,psi_mod,w_sup_l2,c2_rhs,c2_margin,c3_rhs,c3_margin,proof_lhs,proof_rhs,"
        "telescoped_exact,telescoped_model,seam_l2,conditions_ok\n";
    for (const auto& r : res.windows)
      csv += csv_row({std::to_string(r.k), format_float(r.T), format_float(r.phi_l2),
                      format_float(r.psi_mod), format_float(r.w_sup_l2), format_float(r.c2_rhs),
                      format_float(r.c2_margin), format_float(r.c3_rhs), format_float(r.c3_margin),
                      format_float(r.proof_lhs), format_float(r.proof_rhs),
                      format_float(r.telescoped_exact), format_float(r.telescoped_model),
                      format_float(r.seam_l2), r.conditions_ok ? "1" : "0"});
    write_text_file(outs.path("windows.csv"), csv);
    write_text_file(outs.path("ledger.csv"), ledger_csv(res.trajectory));
    write_field(outs.path("final.dump"), res.trajectory.final_field());
    finish_manifest("global-run", o, outs, t0);
  } catch (...) {
    outs.discard_all();
    throw;
  }
  return 0;
}

int cmd_corpus(const CommonOpts& o) {
  auto t0 = std::chrono::steady_clock::now();
  GridSpec g = make_grid(o.n, o.m, o.L);
  OutputSet outs(o.outdir);
  try {
    std::string csv = "id,label,l2,linf\n";
    for (int id = 0; id < kCorpusSize; ++id) {
      SpectralField f = corpus_member(g, id);
      write_field(outs.path("corpus_" + std::to_string(id) + ".dump"), f);
      csv += csv_row({std::to_string(id), corpus_label(id), format_float(lp_norm(f, 2)),
                      format_float(lp_norm(f, kInf))});
    }
    write_text_file(outs.path("corpus.csv"), csv);
    finish_manifest("corpus", o, outs, t0);
  } catch (...) {
    outs.discard_all();
    throw;
  }
  return 0;
}

int cmd_replay(const std::string& manifest_path, const std::string& workdir) {
  RunManifest m = RunManifest::from_json_file(manifest_path);
  std::vector<std::string> args = {m.subcommand};
  for (const auto& [k, v] : m.config) {
    if (k == "linear_only") {
      if (v == "1") args.push_back("--linear");
      continue;
    }
    if (k == "auto_escalate") {
      if (v == "1") args.push_back("--auto-escalate");
      continue;
    }
    if (k == "weight_mode") {
      if (v == "hard-cap") args.push_back("--hard-cap-weight");
      continue;
    }
    args.push_back("--" + k);
    args.push_back(v);
  }
  args.push_back("--outdir");
  args.push_back(workdir);
  const int rc = run_cli(args);
  if (rc != 0) return rc;
  bool all_ok = true;
  for (const auto& [rel, sum] : m.outputs) {
    const std::string replayed = file_checksum((fs::path(workdir) / rel).string());
    const bool ok = replayed == sum;
    all_ok = all_ok && ok;
    std::cout << (ok ? "match    " : "MISMATCH ") << rel << "\n";
  }
  return all_ok ? 0 : 3;
}

}  // namespace

int run_cli(std::vector<std::string> args) {
  CLI::App app{"inls-lab: pseudospectral toolkit for the inhomogeneous NLS"};
  app.require_subcommand(1);

  CommonOpts o;
  bool table = true;
  std::string manifest_path, replay_workdir = "replay_out";

  // Config-file precedence: JSON defaults first, flags override.
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") o.config_file = args[i + 1];
  if (!o.config_file.empty()) {
    nlohmann::json j = nlohmann::json::parse(read_text_file(o.config_file));
    auto num = [&](const char* k, auto& slot) {
      if (j.contains(k)) slot = j[k].get<std::decay_t<decltype(slot)>>();
    };
    num("n", o.n); num("m", o.m); num("L", o.L);
    num("alpha", o.alpha); num("b", o.b); num("mu", o.mu);
    num("dt", o.dt); num("T", o.T); num("horizon", o.horizon);
    num("blocks", o.blocks); num("substeps", o.substeps);
    num("contraction_C", o.contraction_C); num("C_split", o.C_split);
    num("seed", o.seed);
    if (j.contains("p")) o.p = j["p"].get<double>();
    if (j.contains("N")) o.N = j["N"].get<double>();
    if (j.contains("init")) o.init = j["init"].get<std::string>();
  }

  auto add_common = [&](CLI::App* c) {
    c->add_option("--n", o.n);
    c->add_option("--m", o.m);
    c->add_option("--L", o.L);
    c->add_option("--alpha", o.alpha);
    c->add_option("--b", o.b);
    c->add_option("--mu", o.mu);
    c->add_option("--p", [&o](const std::vector<std::string>& v) { o.p = std::stod(v[0]); return true; }, "modulation exponent")->expected(1);
    c->add_option("--N", [&o](const std::vector<std::string>& v) { o.N = std::stod(v[0]); return true; }, "split parameter")->expected(1);
    c->add_option("--dt", o.dt);
    c->add_option("--T", o.T);
    c->add_option("--horizon", o.horizon);
    c->add_option("--blocks", o.blocks);
    c->add_option("--substeps", o.substeps);
    c->add_option("--max_iters", o.max_iters);
    c->add_option("--contraction_tol", o.contraction_tol);
    c->add_option("--monitors", o.monitors, "comma list from mass,energy,ynorm");
    c->add_option("--contraction_C", o.contraction_C);
    c->add_option("--C_split", o.C_split);
    c->add_option("--blowup_threshold", o.blowup_threshold);
    c->add_flag("--linear", o.linear_only, "disable the nonlinearity (test mode)");
    c->add_flag("--hard-cap-weight", o.hard_cap_weight);
    c->add_option("--seed", o.seed);
    c->add_option("--outdir", o.outdir);
    c->add_option("--init", o.init);
    c->add_option("--config", o.config_file)->check(CLI::ExistingFile);
    c->add_option("--method", o.method)->check(CLI::IsMember({"splitstep", "picard"}));
    c->add_option("--dump-at", o.dump_times, "comma-separated times for field dumps");
    c->add_option("--exponents", o.exponent_list, "p,q,s triples separated by ';'");
    c->add_flag("--auto-escalate", o.auto_escalate, "double N on condition failure");
  };

  CLI::App* c_exp = app.add_subcommand("exponents", "derived-parameter report");
  add_common(c_exp);
  c_exp->add_option("--T-candidate", [&o](const std::vector<std::string>& v) { o.T_candidate = std::stod(v[0]); return true; }, "window to check against (c1)-(c3)")->expected(1);
  c_exp->add_flag("!--no-table", table, "suppress the human-readable table");

  CLI::App* c_sim = app.add_subcommand("simulate", "integrate the PDE");
  add_common(c_sim);

  CLI::App* c_norms = app.add_subcommand("norms", "corpus norm table");
  add_common(c_norms);

  CLI::App* c_split = app.add_subcommand("split", "high-low decomposition");
  add_common(c_split);

  CLI::App* c_glob = app.add_subcommand("global-run", "windowed extension iteration");
  add_common(c_glob);

  CLI::App* c_corp = app.add_subcommand("corpus", "emit the frozen corpus");
  add_common(c_corp);

  CLI::App* c_rep = app.add_subcommand("replay", "re-run a manifest and verify checksums");
  c_rep->add_option("manifest", manifest_path)->required()->check(CLI::ExistingFile);
  c_rep->add_option("--workdir", replay_workdir);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 4;
  }

  try {
    if (c_exp->parsed()) return cmd_exponents(o, table);
    if (c_sim->parsed()) return cmd_simulate(o);
    if (c_norms->parsed()) return cmd_norms(o);
    if (c_split->parsed()) return cmd_split(o);
    if (c_glob->parsed()) return cmd_global_run(o);
    if (c_corp->parsed()) return cmd_corpus(o);
    if (c_rep->parsed()) return cmd_replay(manifest_path, replay_workdir);
  } catch (const HypothesisError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 4;
}

}  // namespace inls
