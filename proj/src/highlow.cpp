#include "inls/highlow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "inls/errors.hpp"

namespace inls {

namespace {

ModulationParams smooth_space(double alpha) {
  return ModulationParams{alpha + 2.0, conjugate_exponent(alpha + 2.0), 0.0};
}

double sup_l2(const Trajectory& t) {
  double s = 0;
  for (const auto& r : t.ledger) s = std::max(s, r.mass);
  return s;
}

}  // namespace

SplitResult split(const SpectralField& u, double N, const ProblemParams& params,
                  const WindowFamily& w, double C_split) {
  if (!(N > 1)) throw HypothesisError({"split parameter N must exceed 1"});
  if (!params.p) throw HypothesisError({"split requires the modulation exponent p"});
  ProblemParams pp = params;
  pp.N = N;
  ExponentReport rep = derive_all(pp);  // validates p in [2, alpha+2) and the b, alpha ranges
  if (!(*params.p > 2.0) || !(*params.p < rep.p_max))
    throw HypothesisError({"split requires p in (2, p_max)"});

  const double alpha = params.alpha;
  const double beta = (0.5 - 1.0 / *params.p) / (1.0 / *params.p - 1.0 / (alpha + 2.0));
  const ModulationParams data_space{*params.p, conjugate_exponent(*params.p), 0.0};
  const ModulationParams psi_space = smooth_space(alpha);

  const double u_mod = mod_norm(u, data_space, w);
  SplitResult out{SpectralField::zero(u.grid()), SpectralField::zero(u.grid()), N};
  out.data_mod_norm = u_mod;
  out.target_phi = C_split * u_mod * std::pow(N, beta);
  out.target_psi = C_split * u_mod / N;

  const RVec a = block_lp_norms(u, alpha + 2.0, w);
  const auto& K = w.active_set();
  std::vector<std::size_t> order(K.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a[i] < a[j]; });

  // psi built from the t smallest blocks; the frequency mask is the partial
  // sum of their windows applied to hat u.
  auto psi_field = [&](std::size_t t) {
    RVec mask = RVec::Zero(u.grid().size());
    for (std::size_t i = 0; i < t; ++i) mask += w.sigma(K[order[i]]);
    CVec c = u.frequency();
    for (Eigen::Index j = 0; j < c.size(); ++j) c[j] *= mask[j];
    return SpectralField::from_frequency(u.grid(), std::move(c));
  };
  auto psi_ok = [&](std::size_t t) {
    if (t == 0) return true;
    return mod_norm(psi_field(t), psi_space, w) <= out.target_psi;
  };

  // Largest prefix count whose exact psi-norm meets the target: bisection on
  // the nested family, then a downward verification pass in case the exact
  // norm is not perfectly monotone along the prefixes.
  std::size_t lo = 0, hi = K.size();
  if (psi_ok(hi)) {
    lo = hi;
  } else {
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      (psi_ok(mid) ? lo : hi) = mid;
    }
  }
  while (lo > 0 && !psi_ok(lo)) --lo;

  out.psi = psi_field(lo);
  out.phi = SpectralField::from_frequency(u.grid(), u.frequency() - out.psi.frequency());
  out.tau = lo > 0 ? a[order[lo - 1]] : 0.0;
  out.achieved_phi_l2 = lp_norm(out.phi, 2);
  out.achieved_psi_mod = mod_norm(out.psi, psi_space, w);
  const double u_l2 = lp_norm(u, 2);
  out.trivial_high = lp_norm(out.psi, 2) <= 1e-14 * u_l2;  // psi carries nothing
  out.trivial_low = out.achieved_phi_l2 <= 1e-14 * u_l2;   // all of u fits in psi
  return out;
}

PerturbedResult perturbed_solve(const SpectralField& phi, const SpectralField& psi, double T,
                                const SolverConfig& cfg, const WindowFamily& wf) {
  cfg.validate();
  const GridSpec& g = phi.grid();
  if (!(g == psi.grid())) throw std::invalid_argument("perturbed_solve: grid mismatch");
  const double alpha = cfg.params.alpha;
  const int mu = cfg.params.mu;

  const double phi_l2 = lp_norm(phi, 2);
  const double psi_mod = mod_norm(psi, smooth_space(alpha), wf);
  NormInputs norms;
  norms.phi_l2 = phi_l2;
  norms.psi_mod = psi_mod;
  ExponentReport rep = derive_all(cfg.params, norms, cfg.contraction_C, T);
  {
    std::vector<std::string> bad;
    if (rep.c1_ok && !*rep.c1_ok) bad.push_back("(c1) violated: T > 1");
    if (rep.c2_ok && !*rep.c2_ok)
      bad.push_back("(c2) violated: T = " + std::to_string(T) + " > " + std::to_string(*rep.c2_rhs));
    if (rep.c3_ok && !*rep.c3_ok)
      bad.push_back("(c3) violated: T = " + std::to_string(T) + " > " + std::to_string(*rep.c3_rhs));
    if (!bad.empty()) throw HypothesisError(std::move(bad));
  }

  const SingularWeight weight =
      cfg.linear_only ? SingularWeight::zero(g) : SingularWeight(g, cfg.params.b, cfg.weight_mode);

  const int Q = cfg.picard.substeps;
  const double tau = T / Q;

  // v: split-step on data phi with steps landing on the quadrature midpoints.
  SolverConfig vcfg = cfg;
  vcfg.T = T;
  vcfg.dt = 0.5 * tau;
  Trajectory v_traj = splitstep_solve(phi, vcfg);
  if (v_traj.blowup) throw NumericalError("perturbed_solve: v-evolution flagged blow-up");

  // Free flights of psi at midpoints.
  std::vector<CVec> psi_mid(Q);
  for (int r = 0; r < Q; ++r) psi_mid[r] = evolve_free(psi, (r + 0.5) * tau).physical();
  std::vector<const CVec*> v_mid(Q);
  for (int r = 0; r < Q; ++r) v_mid[r] = &v_traj.fields[2 * r + 1].physical();

  const double hn = std::pow(g.mesh(), g.dim);
  const double y_q = 4.0 * (alpha + 2.0) / (g.dim * alpha);

  std::vector<SpectralField> w_node(Q + 1, SpectralField::zero(g));
  std::vector<CVec> w_mid(Q, CVec::Zero(g.size()));

  PerturbedResult out{Trajectory{}, Trajectory{}, ContractionHistory{}, 0.0, false};
  out.ball_radius = (3.0 / cfg.contraction_C) * std::pow(T, rep.growth_exponent) * psi_mod;

  const double scale = std::max({phi_l2, psi_mod, 1e-300});
  for (int it = 1; it <= cfg.picard.max_iters; ++it) {
    // Integrand at the midpoints: mu w(x) [ G(v + S psi, w) + G(v, S psi) ].
    std::vector<SpectralField> nl;
    nl.reserve(Q);
    for (int r = 0; r < Q; ++r) {
      const CVec& vv = *v_mid[r];
      const CVec& ps = psi_mid[r];
      const CVec& ww = w_mid[r];
      CVec val(vv.size());
      for (Eigen::Index i = 0; i < vv.size(); ++i) {
        const Complex base = vv[i] + ps[i];
        const Complex g1 = g_difference_scalar(base, ww[i], Complex(0, 0), alpha);
        const Complex g2 = g_difference_scalar(vv[i], ps[i], Complex(0, 0), alpha);
        val[i] = mu * weight.samples()[i] * (g1 + g2);
      }
      nl.push_back(SpectralField::from_physical(g, std::move(val)));
    }

    std::vector<SpectralField> new_node;
    new_node.reserve(Q + 1);
    new_node.push_back(SpectralField::zero(g));
    SpectralField duhamel = SpectralField::zero(g);
    for (int r = 0; r < Q; ++r) {
      duhamel = SpectralField::from_frequency(
          g, evolve_free(duhamel, tau).frequency() +
                 tau * evolve_free(nl[r], 0.5 * tau).frequency());
      new_node.push_back(
          SpectralField::from_frequency(g, Complex(0, 1) * duhamel.frequency()));
    }

    double sup_d = 0, y_acc = 0;
    std::vector<double> diff_a2(Q + 1);
    for (int r = 0; r <= Q; ++r) {
      const CVec d = new_node[r].physical() - w_node[r].physical();
      sup_d = std::max(sup_d, std::sqrt(d.squaredNorm() * hn));
      double a2 = 0;
      for (Eigen::Index i = 0; i < d.size(); ++i) a2 += std::pow(std::abs(d[i]), alpha + 2.0);
      diff_a2[r] = std::pow(a2 * hn, 1.0 / (alpha + 2.0));
    }
    for (int r = 0; r < Q; ++r)
      y_acc += 0.5 * tau * (std::pow(diff_a2[r], y_q) + std::pow(diff_a2[r + 1], y_q));
    const double diff = std::max(sup_d, std::pow(y_acc, 1.0 / y_q));

    out.history.differences.push_back(diff);
    out.history.iterations = it;
    if (out.history.differences.size() >= 2) {
      const double prev = out.history.differences[out.history.differences.size() - 2];
      out.history.ratios.push_back(prev > 0 ? diff / prev : 0.0);
    }
    w_node = std::move(new_node);
    for (int r = 0; r < Q; ++r)
      w_mid[r] = 0.5 * (w_node[r].physical() + w_node[r + 1].physical());

    if (diff <= cfg.picard.contraction_tol * scale) {
      out.history.converged = true;
      break;
    }
    const std::size_t nr = out.history.ratios.size();
    if (nr >= 2 && out.history.ratios[nr - 1] > 1.0 && out.history.ratios[nr - 2] > 1.0) {
      std::ostringstream os;
      os << "perturbed_solve: non-contraction, ratios " << out.history.ratios[nr - 2] << ", "
         << out.history.ratios[nr - 1];
      throw NumericalError(os.str());
    }
  }

  const SingularWeight& wgt = weight;
  Trajectory w_traj;
  for (int r = 0; r <= Q; ++r) {
    w_traj.times.push_back(r * tau);
    LedgerRow row;
    row.t = r * tau;
    row.mass = lp_norm(w_node[r], 2);
    row.energy = energy(w_node[r], wgt, alpha, mu);
    row.lp_alpha2 = lp_norm(w_node[r], alpha + 2.0);
    row.linf = lp_norm(w_node[r], kInf);
    w_traj.ledger.push_back(row);
  }
  w_traj.fields = std::move(w_node);
  {
    double acc = 0;
    for (std::size_t i = 1; i < w_traj.ledger.size(); ++i)
      acc += 0.5 * (w_traj.times[i] - w_traj.times[i - 1]) *
             (std::pow(w_traj.ledger[i - 1].lp_alpha2, y_q) + std::pow(w_traj.ledger[i].lp_alpha2, y_q));
    w_traj.y_norm = std::pow(acc, 1.0 / y_q);
  }
  out.ball_exceeded = w_traj.y_norm > out.ball_radius * (1 + 1e-9);

  // Thin v to the nodes so both trajectories share the time axis.
  Trajectory v_nodes;
  for (int r = 0; r <= Q; ++r) {
    v_nodes.times.push_back(r * tau);
    v_nodes.fields.push_back(v_traj.fields[2 * r]);
    v_nodes.ledger.push_back(v_traj.ledger[2 * r]);
  }
  v_nodes.y_norm = v_traj.y_norm;
  out.v = std::move(v_nodes);
  out.w = std::move(w_traj);
  return out;
}

GlobalRunResult global_run(const SpectralField& u0, double N, double horizon,
                           const SolverConfig& cfg, const WindowFamily& wf, double C_split,
                           bool auto_escalate) {
  cfg.validate();
  if (!(horizon > 0) || !std::isfinite(horizon))
    throw HypothesisError({"global_run horizon must be finite and positive"});
  const double alpha = cfg.params.alpha;
  const ModulationParams psi_space = smooth_space(alpha);

  double current_N = N;
  int escal = 0;
  for (;; ++escal, current_N *= 2) {
    if (escal > 4) throw NumericalError("global_run: conditions kept failing up to N cap");

    ProblemParams pp = cfg.params;
    pp.N = current_N;
    ExponentReport rep = derive_all(pp, {}, cfg.contraction_C);
    const double T = *rep.T_window;
    const int n_windows = static_cast<int>(std::ceil(horizon / T - 1e-12));

    SplitResult sp = split(u0, current_N, pp, wf, C_split);
    SpectralField phi = sp.phi;
    const SpectralField& psi0 = sp.psi;

    GlobalRunResult out{Trajectory{}, {}, sp, rep, T, escal, current_N};
    const double phi0_l2 = sp.achieved_phi_l2;
    double w_sum = 0;
    bool failed = false;

    SpectralField prev_end = u0;  // reassembled value entering each window
    for (int k = 0; k < n_windows && !failed; ++k) {
      const SpectralField psi_k = evolve_free(psi0, k * T);
      const double phi_l2 = lp_norm(phi, 2);
      const double psi_mod = mod_norm(psi_k, psi_space, wf);

      WindowRow row;
      row.k = k;
      row.T = T;
      row.phi_l2 = phi_l2;
      row.psi_mod = psi_mod;
      row.proof_lhs = 3.0 * cfg.contraction_C * std::pow(current_N, *rep.beta);
      row.proof_rhs = phi_l2 + psi_mod;

      NormInputs norms;
      norms.phi_l2 = phi_l2;
      norms.psi_mod = psi_mod;
      ExponentReport wrep = derive_all(pp, norms, cfg.contraction_C, T);
      row.c2_rhs = wrep.c2_rhs.value_or(0);
      row.c3_rhs = wrep.c3_rhs.value_or(0);
      row.c2_margin = row.c2_rhs / T;
      row.c3_margin = row.c3_rhs / T;
      row.conditions_ok = wrep.c1_ok.value_or(true) && wrep.c2_ok.value_or(true) &&
                          wrep.c3_ok.value_or(true);
      if (!row.conditions_ok) {
        std::ostringstream os;
        os << "window " << k << ":";
        if (!wrep.c1_ok.value_or(true)) os << " (c1)";
        if (!wrep.c2_ok.value_or(true)) os << " (c2)";
        if (!wrep.c3_ok.value_or(true)) os << " (c3)";
        row.failed_condition = os.str();
        out.windows.push_back(row);
        if (auto_escalate) {
          failed = true;
          break;
        }
        throw NumericalError("global_run: condition failure at " + row.failed_condition);
      }

      PerturbedResult pr = perturbed_solve(phi, psi_k, T, cfg, wf);

      // Reassemble u on this window's nodes: v + w + free flight of psi_0.
      const std::size_t nn = pr.v.times.size();
      for (std::size_t r = 0; r < nn; ++r) {
        const double t_abs = k * T + pr.v.times[r];
        SpectralField u_t = SpectralField::from_frequency(
            u0.grid(), pr.v.fields[r].frequency() + pr.w.fields[r].frequency() +
                           evolve_free(psi_k, pr.v.times[r]).frequency());
        if (r == 0) {
          const CVec d = u_t.physical() - prev_end.physical();
          row.seam_l2 = std::sqrt(d.squaredNorm() * std::pow(u0.grid().mesh(), u0.grid().dim));
        }
        if (r == 0 && k > 0) continue;  // node shared with the previous window
        out.trajectory.times.push_back(t_abs);
        out.trajectory.fields.push_back(u_t);
        LedgerRow lr;
        lr.t = t_abs;
        lr.mass = lp_norm(u_t, 2);
        lr.lp_alpha2 = lp_norm(u_t, alpha + 2.0);
        lr.linf = lp_norm(u_t, kInf);
        lr.energy = 0;
        out.trajectory.ledger.push_back(lr);
      }
      prev_end = out.trajectory.fields.back();

      row.w_sup_l2 = sup_l2(pr.w);
      row.telescoped_exact = phi0_l2 + w_sum;
      row.telescoped_model = C_split * sp.data_mod_norm * std::pow(current_N, *rep.beta) +
                             std::pow(T, rep.growth_exponent) * k * C_split * sp.data_mod_norm / current_N;
      out.windows.push_back(row);
      w_sum += row.w_sup_l2;

      phi = SpectralField::from_frequency(
          u0.grid(), pr.v.fields.back().frequency() + pr.w.fields.back().frequency());
    }
    if (!failed) return out;
  }
}

}  // namespace inls
