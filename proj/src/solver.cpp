#include "inls/solver.hpp"

#include <cmath>
#include <sstream>

#include "inls/errors.hpp"

namespace inls {

namespace {

SingularWeight make_weight(const GridSpec& g, const SolverConfig& cfg) {
  if (cfg.linear_only) return SingularWeight::zero(g);
  return SingularWeight(g, cfg.params.b, cfg.weight_mode);
}

SpectralField phase_step(const SpectralField& u, const SingularWeight& w, double alpha, int mu,
                         double tau) {
  CVec v = u.physical();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v[i] *= std::polar(1.0, mu * w.samples()[i] * std::pow(std::abs(v[i]), alpha) * tau);
  return SpectralField::from_physical(u.grid(), std::move(v));
}

LedgerRow make_row(double t, const SpectralField& u, const SingularWeight& w, double alpha, int mu,
                   const MonitorConfig& monitors = {}) {
  LedgerRow r;
  r.t = t;
  r.mass = monitors.mass ? lp_norm(u, 2) : 0.0;
  r.energy = monitors.energy ? energy(u, w, alpha, mu) : 0.0;
  r.lp_alpha2 = lp_norm(u, alpha + 2.0);
  r.linf = lp_norm(u, kInf);
  return r;
}

double trapezoid_y_norm(const std::vector<LedgerRow>& rows, double q) {
  if (rows.size() < 2) return 0;
  double acc = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double dt = rows[i].t - rows[i - 1].t;
    acc += 0.5 * dt * (std::pow(rows[i - 1].lp_alpha2, q) + std::pow(rows[i].lp_alpha2, q));
  }
  return std::pow(acc, 1.0 / q);
}

}  // namespace

void SolverConfig::validate() const {
  std::vector<std::string> bad;
  if (!(dt > 0)) bad.push_back("dt must be positive");
  if (!(T > 0)) bad.push_back("horizon T must be positive");
  if (picard.max_iters < 2) bad.push_back("picard.max_iters must be >= 2");
  if (picard.substeps < 2) bad.push_back("picard.substeps must be >= 2");
  if (!(blowup_threshold > 1)) bad.push_back("blowup_threshold must exceed 1");
  if (!bad.empty()) throw HypothesisError(std::move(bad));
}

const SpectralField& Trajectory::at_time(double t, double tol) const {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) <= tol) return fields[i];
  throw std::invalid_argument("Trajectory::at_time: no sample at requested time");
}

Trajectory splitstep_solve(const SpectralField& u0, const SolverConfig& cfg) {
  cfg.validate();
  const GridSpec& g = u0.grid();
  const double alpha = cfg.params.alpha;
  const int mu = cfg.params.mu;
  const SingularWeight w = make_weight(g, cfg);

  const long steps = std::max<long>(1, std::lround(cfg.T / cfg.dt));
  const double dt = cfg.T / steps;

  Trajectory out;
  out.times.reserve(steps + 1);
  out.fields.reserve(steps + 1);
  out.ledger.reserve(steps + 1);

  SpectralField u = u0;
  out.times.push_back(0.0);
  out.fields.push_back(u);
  out.ledger.push_back(make_row(0.0, u, w, alpha, mu, cfg.monitors));
  const double ref_alpha2 = out.ledger.front().lp_alpha2;
  const double ref_linf = out.ledger.front().linf;

  for (long s = 1; s <= steps; ++s) {
    u = phase_step(u, w, alpha, mu, 0.5 * dt);
    u = evolve_free(u, dt);
    u = phase_step(u, w, alpha, mu, 0.5 * dt);
    const double t = s * dt;
    LedgerRow row = make_row(t, u, w, alpha, mu, cfg.monitors);
    if (!std::isfinite(row.lp_alpha2) || !std::isfinite(row.linf))
      throw NumericalError("splitstep_solve: non-finite field at t = " + std::to_string(t));
    out.times.push_back(t);
    out.fields.push_back(u);
    out.ledger.push_back(row);
    const bool blown = (ref_alpha2 > 0 && row.lp_alpha2 > cfg.blowup_threshold * ref_alpha2) ||
                       (ref_linf > 0 && row.linf > cfg.blowup_threshold * ref_linf);
    if (blown) {
      out.blowup = true;
      out.blowup_time = t;
      break;
    }
  }
  if (cfg.monitors.ynorm) {
    const double q = 4.0 * (alpha + 2.0) / (g.dim * alpha);
    out.y_norm = trapezoid_y_norm(out.ledger, q);
  }
  return out;
}

std::pair<Trajectory, ContractionHistory> picard_solve(const SpectralField& u0,
                                                       const SolverConfig& cfg) {
  cfg.validate();
  const GridSpec& g = u0.grid();
  const double alpha = cfg.params.alpha;
  const int mu = cfg.params.mu;
  const SingularWeight w = make_weight(g, cfg);

  // Hypothesis gate: the window must not exceed the local existence time.
  if (!cfg.linear_only) {
    WindowFamily wf = WindowFamily::with_defaults(g);
    NormInputs norms;
    norms.data_l2_plus_mod = data_norm_proxy(u0, alpha, wf);
    ExponentReport rep = derive_all(cfg.params, norms, cfg.contraction_C);
    if (rep.T_local && cfg.T > *rep.T_local * (1 + 1e-12))
      throw HypothesisError({"picard window T = " + std::to_string(cfg.T) +
                             " exceeds T_local = " + std::to_string(*rep.T_local)});
  }

  const int Q = cfg.picard.substeps;
  const double tau = cfg.T / Q;

  // Free parts at the nodes and at the quadrature midpoints.
  std::vector<SpectralField> free_node, u_node;
  std::vector<CVec> mid_prev(Q, CVec());
  free_node.reserve(Q + 1);
  for (int r = 0; r <= Q; ++r) free_node.push_back(evolve_free(u0, r * tau));
  u_node = free_node;
  for (int r = 0; r < Q; ++r)
    mid_prev[r] = evolve_free(u0, (r + 0.5) * tau).physical();

  ContractionHistory hist;
  const double scale = std::max(lp_norm(u0, 2), 1e-300);
  const double y_q = 4.0 * (alpha + 2.0) / (g.dim * alpha);
  const double hn = std::pow(g.mesh(), g.dim);

  for (int it = 1; it <= cfg.picard.max_iters; ++it) {
    // Nonlinear term at the midpoints of the previous iterate.
    std::vector<SpectralField> nl;
    nl.reserve(Q);
    for (int r = 0; r < Q; ++r) {
      CVec v = mid_prev[r];
      if (cfg.linear_only) {
        v.setZero();
      } else {
        for (Eigen::Index i = 0; i < v.size(); ++i)
          v[i] *= mu * w.samples()[i] * std::pow(std::abs(v[i]), alpha);
      }
      nl.push_back(SpectralField::from_physical(g, std::move(v)));
    }

    // I_{r+1} = S(tau) I_r + tau S(tau/2) nl_r; new node value = free + i I_r.
    std::vector<SpectralField> new_node;
    new_node.reserve(Q + 1);
    new_node.push_back(free_node[0]);
    SpectralField duhamel = SpectralField::zero(g);
    for (int r = 0; r < Q; ++r) {
      duhamel = SpectralField::from_frequency(
          g, evolve_free(duhamel, tau).frequency() +
                 tau * evolve_free(nl[r], 0.5 * tau).frequency());
      new_node.push_back(SpectralField::from_frequency(
          g, free_node[r + 1].frequency() + Complex(0, 1) * duhamel.frequency()));
    }

    // X_1-proxy distance between iterates: max of sup-L^2 and Y(T).
    double sup_l2 = 0, y_acc = 0;
    std::vector<double> diff_a2(Q + 1);
    for (int r = 0; r <= Q; ++r) {
      const CVec d = new_node[r].physical() - u_node[r].physical();
      sup_l2 = std::max(sup_l2, std::sqrt(d.squaredNorm() * hn));
      double a2 = 0;
      for (Eigen::Index i = 0; i < d.size(); ++i) a2 += std::pow(std::abs(d[i]), alpha + 2.0);
      diff_a2[r] = std::pow(a2 * hn, 1.0 / (alpha + 2.0));
    }
    for (int r = 0; r < Q; ++r)
      y_acc += 0.5 * tau * (std::pow(diff_a2[r], y_q) + std::pow(diff_a2[r + 1], y_q));
    const double diff = std::max(sup_l2, std::pow(y_acc, 1.0 / y_q));

    hist.differences.push_back(diff);
    hist.iterations = it;
    if (hist.differences.size() >= 2) {
      const double prev = hist.differences[hist.differences.size() - 2];
      hist.ratios.push_back(prev > 0 ? diff / prev : 0.0);
    }
    u_node = std::move(new_node);
    for (int r = 0; r < Q; ++r)
      mid_prev[r] = 0.5 * (u_node[r].physical() + u_node[r + 1].physical());

    if (diff <= cfg.picard.contraction_tol * scale) {
      hist.converged = true;
      break;
    }
    const std::size_t nr = hist.ratios.size();
    if (nr >= 2 && hist.ratios[nr - 1] > 1.0 && hist.ratios[nr - 2] > 1.0) {
      std::ostringstream os;
      os << "picard_solve: non-contraction, successive ratios " << hist.ratios[nr - 2] << ", "
         << hist.ratios[nr - 1] << " (T too large or C miscalibrated)";
      throw NumericalError(os.str());
    }
  }

  Trajectory traj;
  traj.times.reserve(Q + 1);
  traj.fields = std::move(u_node);
  for (int r = 0; r <= Q; ++r) {
    traj.times.push_back(r * tau);
    traj.ledger.push_back(make_row(r * tau, traj.fields[r], w, alpha, mu, cfg.monitors));
  }
  traj.y_norm = trapezoid_y_norm(traj.ledger, y_q);
  return {std::move(traj), std::move(hist)};
}

double ytnorm(const Trajectory& traj, double q_t, double r_x) {
  if (traj.times.empty()) throw std::invalid_argument("ytnorm: empty trajectory");
  if (std::isinf(q_t)) {
    double mx = 0;
    for (const auto& f : traj.fields) mx = std::max(mx, lp_norm(f, r_x));
    return mx;
  }
  if (traj.times.size() < 2) return 0;
  double acc = 0;
  std::vector<double> vals(traj.fields.size());
  for (std::size_t i = 0; i < traj.fields.size(); ++i) vals[i] = lp_norm(traj.fields[i], r_x);
  for (std::size_t i = 1; i < vals.size(); ++i)
    acc += 0.5 * (traj.times[i] - traj.times[i - 1]) *
           (std::pow(vals[i - 1], q_t) + std::pow(vals[i], q_t));
  return std::pow(acc, 1.0 / q_t);
}

SpectralField random_field(const GridSpec& g, std::uint64_t seed) {
  std::uint64_t s = seed ? seed : 0x9e3779b97f4a7c15ull;
  auto next = [&s]() {  // splitmix64: deterministic across platforms
    s += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  auto u01 = [&]() { return (next() >> 11) * 0x1p-53; };
  CVec c = CVec::Zero(g.size());
  const int m = g.pts, band = m / 4;
  if (g.dim == 1) {
    for (int k = 0; k < m; ++k)
      if (std::abs(g.signed_index(k)) < band) c[k] = Complex(u01() - 0.5, u01() - 0.5);
  } else {
    for (int kx = 0; kx < m; ++kx)
      for (int ky = 0; ky < m; ++ky)
        if (std::abs(g.signed_index(kx)) < band && std::abs(g.signed_index(ky)) < band)
          c[static_cast<std::size_t>(kx) * m + ky] = Complex(u01() - 0.5, u01() - 0.5);
  }
  SpectralField raw = SpectralField::from_frequency(g, std::move(c));
  const double nrm = lp_norm(raw, 2);
  return SpectralField::from_physical(g, raw.physical() / nrm);
}

double lipschitz_probe(const SpectralField& u0, double delta, const SolverConfig& cfg,
                       std::uint64_t seed) {
  if (delta == 0) return 0;
  const SpectralField pert = random_field(u0.grid(), seed);
  SpectralField u0b = SpectralField::from_physical(u0.grid(), u0.physical() + delta * pert.physical());
  Trajectory a = splitstep_solve(u0, cfg);
  Trajectory b = splitstep_solve(u0b, cfg);
  const std::size_t n = std::min(a.fields.size(), b.fields.size());
  const double hn = std::pow(u0.grid().mesh(), u0.grid().dim);
  double sup = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const CVec d = a.fields[i].physical() - b.fields[i].physical();
    sup = std::max(sup, std::sqrt(d.squaredNorm() * hn));
  }
  return sup / delta;
}

double data_norm_proxy(const SpectralField& u, double alpha, const WindowFamily& w) {
  ModulationParams mp{alpha + 2.0, conjugate_exponent(alpha + 2.0), 0.0};
  return std::min(lp_norm(u, 2), mod_norm(u, mp, w));
}

double calibrate_contraction_constant(const SpectralField& u0, SolverConfig cfg,
                                      const WindowFamily& w, int max_halvings) {
  NormInputs norms;
  norms.data_l2_plus_mod = data_norm_proxy(u0, cfg.params.alpha, w);
  double C = 1.0;
  for (int k = 0; k <= max_halvings; ++k, C *= 0.5) {
    ExponentReport rep = derive_all(cfg.params, norms, C);
    SolverConfig trial = cfg;
    trial.contraction_C = C;
    trial.T = *rep.T_local / 4.0;
    try {
      auto [traj, hist] = picard_solve(u0, trial);
      (void)traj;
      bool ok = hist.converged && !hist.ratios.empty();
      for (std::size_t i = 1; i < hist.ratios.size(); ++i)
        if (hist.ratios[i] > 0.45) ok = false;
      if (ok) return C;
    } catch (const NumericalError&) {
      // halve and retry
    }
  }
  throw NumericalError("calibrate_contraction_constant: no contractive C found");
}

}  // namespace inls
