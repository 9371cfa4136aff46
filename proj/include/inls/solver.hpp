#pragma once

#include <optional>
#include <vector>

#include "inls/evolution.hpp"
#include "inls/exponents.hpp"
#include "inls/grid.hpp"
#include "inls/modspace.hpp"

namespace inls {

struct PicardConfig {
  int max_iters = 25;
  double contraction_tol = 1e-10;
  int substeps = 64;  // Duhamel quadrature substeps per local window
};

struct MonitorConfig {
  bool mass = true;
  bool energy = true;
  bool ynorm = true;
};

struct SolverConfig {
  ProblemParams params;
  double dt = 1e-3;
  double T = 1.0;
  PicardConfig picard;
  MonitorConfig monitors;
  double blowup_threshold = 1e3;  // multiple of the initial combined norm
  bool linear_only = false;       // test mode: weight forced to zero
  SingularWeight::Regularization weight_mode = SingularWeight::Regularization::CellAverage;
  double contraction_C = 1.0;     // calibrated C(n, alpha, b)

  void validate() const;
};

struct LedgerRow {
  double t = 0;
  double mass = 0;      // L^2 norm
  double energy = 0;
  double lp_alpha2 = 0; // spatial L^{alpha+2}
  double linf = 0;
};

/// Time-stamped solution samples with the conserved-quantity ledger.
/// Times are strictly increasing; entries stay finite until a blow-up flag.
struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> fields;
  std::vector<LedgerRow> ledger;
  bool blowup = false;
  double blowup_time = 0;
  double y_norm = 0;  // L^{4(alpha+2)/(n alpha)}_T L^{alpha+2} over the run

  const SpectralField& at_time(double t, double tol = 1e-9) const;
  const SpectralField& final_field() const { return fields.back(); }
};

struct ContractionHistory {
  std::vector<double> differences;  // successive-iterate distances in the X_1 proxy
  std::vector<double> ratios;
  bool converged = false;
  int iterations = 0;
};

/// Strang splitting: half-step phase u -> u exp(i mu w(x) |u|^alpha dt/2),
/// full free step, half-step phase. Both sub-flows preserve the L^2 norm, so
/// mass is conserved to rounding; the ledger is filled at every step.
/// Raises the blow-up flag when a monitored norm passes the threshold.
Trajectory splitstep_solve(const SpectralField& u0, const SolverConfig& cfg);

/// Picard iteration on the Duhamel equation
///   u = e^{itD}u0 + i mu int_0^t e^{i(t-s)D} |x|^{-b}(|u|^alpha u)(s) ds,
/// midpoint quadrature on uniform substeps, e^{i(t-s)D} assembled from the
/// group property. Stops on the X_1-proxy difference (max of L^inf_T L^2 and
/// Y(T)); two consecutive ratios above one raise a non-contraction error.
/// Requires cfg.T <= T_local for the calibrated constant.
std::pair<Trajectory, ContractionHistory> picard_solve(const SpectralField& u0,
                                                       const SolverConfig& cfg);

/// ( int_0^T ||u(t)||_{L^r}^q dt )^{1/q} by trapezoid over the samples;
/// max over samples for q = inf. Rejects an empty trajectory.
double ytnorm(const Trajectory& traj, double q_t, double r_x);

/// sup_t ||u(t; u0 + delta g) - u(t; u0)||_2 / delta for a seeded unit-norm
/// perturbation g; delta = 0 returns 0.
double lipschitz_probe(const SpectralField& u0, double delta, const SolverConfig& cfg,
                       std::uint64_t seed = 2024);

/// Upper-bound proxy for the L^2 + M^{alpha+2,(alpha+2)'} data norm:
/// min(||u||_2, ||u||_M) (trivial one-sided splits of the infimum).
double data_norm_proxy(const SpectralField& u, double alpha, const WindowFamily& w);

/// Halving search for the contraction constant: largest C in {1, 1/2, ...}
/// whose T_local/4 window gives Picard ratios <= 0.45 past the first iterate.
double calibrate_contraction_constant(const SpectralField& u0, SolverConfig cfg,
                                      const WindowFamily& w, int max_halvings = 12);

/// Seeded band-limited unit-L^2 noise (perturbations, probe data).
SpectralField random_field(const GridSpec& g, std::uint64_t seed);

}  // namespace inls
