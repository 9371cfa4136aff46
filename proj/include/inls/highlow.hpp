#pragma once

#include <optional>
#include <vector>

#include "inls/modspace.hpp"
#include "inls/solver.hpp"

namespace inls {

/// Constructive high-low split u = phi + psi.
struct SplitResult {
  SpectralField phi;  // rough part, controlled in L^2
  SpectralField psi;  // smooth-in-modulation part
  double N = 0;
  double tau = 0;  // block-norm threshold actually used
  double data_mod_norm = 0;        // ||u||_{M^{p,p'}}
  double achieved_phi_l2 = 0;
  double achieved_psi_mod = 0;     // M^{alpha+2,(alpha+2)'}
  double target_phi = 0;           // C ||u||_{M^{p,p'}} N^beta
  double target_psi = 0;           // C ||u||_{M^{p,p'}} / N
  bool trivial_high = false;       // psi = 0 (no block fits under the target)
  bool trivial_low = false;        // phi = 0 (all of u fits in psi)
};

/// Per-block thresholding split: order blocks by ||block_k u||_{L^{alpha+2}},
/// send blocks above tau to phi and the rest to psi, with tau the largest
/// threshold keeping ||psi||_{M^{alpha+2,(alpha+2)'}} <= C ||u||_{M^{p,p'}}/N
/// (a hard constraint, verified on the returned split). phi = u - psi exactly.
/// The smooth exponent is pinned to r = alpha + 2.
SplitResult split(const SpectralField& u, double N, const ProblemParams& params,
                  const WindowFamily& w, double C_split = 1.0);

struct PerturbedResult {
  Trajectory v;  // L^2 evolution of phi
  Trajectory w;  // perturbation solving the G-coupled integral equation
  ContractionHistory history;
  double ball_radius = 0;  // A = (3/C) T^{n alpha/(4(alpha+2))} ||psi||_M
  bool ball_exceeded = false;
};

/// Solves the perturbed window: v by split-step on data phi, w by Picard on
///   w = i mu int_0^t e^{i(t-s)D}|x|^{-b}[ G(v + e^{isD}psi, w) + G(v, e^{isD}psi) ] ds
/// with the two-argument G(a, c) = |a+c|^alpha(a+c) - |a|^alpha a.
/// Refuses windows violating conditions (c1)-(c3), naming the condition.
PerturbedResult perturbed_solve(const SpectralField& phi, const SpectralField& psi, double T,
                                const SolverConfig& cfg, const WindowFamily& wf);

struct WindowRow {
  int k = 0;
  double T = 0;
  double phi_l2 = 0;
  double psi_mod = 0;
  double w_sup_l2 = 0;       // ||w_k||_{L^inf_T L^2}
  double c2_rhs = 0, c2_margin = 0;
  double c3_rhs = 0, c3_margin = 0;
  double proof_lhs = 0;      // 3 C N^beta, the proof-side comparison
  double proof_rhs = 0;      // ||phi_k||_2 + ||psi_k||_M
  double telescoped_exact = 0;  // ||phi_0||_2 + sum_{j<k} ||w_j||_{L^inf L^2}
  double telescoped_model = 0;  // C N^beta + T^{n a/(4(a+2))} k C/N  (split constants)
  double seam_l2 = 0;        // reassembly jump entering window k
  bool conditions_ok = true;
  std::string failed_condition;
};

struct GlobalRunResult {
  Trajectory trajectory;  // reassembled u on the concatenated window nodes
  std::vector<WindowRow> windows;
  SplitResult initial_split;
  ExponentReport report;
  double window_length = 0;  // T(N)
  int escalations = 0;       // times N was doubled after a condition failure
  double final_N = 0;
};

/// Bourgain-style extension: split the data, then repeat perturbed solves on
/// consecutive windows [kT, (k+1)T] with phi_k = v_{k-1}(T) + w_{k-1}(T) and
/// psi_k = e^{ikT D} psi_0 (exact free flight), reassembling
/// u(t) = v_k(t - kT) + w_k(t - kT) + e^{itD} psi_0. The ledger records the
/// mass bookkeeping and the condition margins per window. A condition failure
/// either doubles N (auto_escalate) or stops with the step index reported.
GlobalRunResult global_run(const SpectralField& u0, double N, double horizon,
                           const SolverConfig& cfg, const WindowFamily& wf,
                           double C_split = 1.0, bool auto_escalate = false);

}  // namespace inls
