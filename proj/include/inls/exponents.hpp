#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace inls {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Hoelder conjugate, with 1 <-> inf.
double conjugate_exponent(double p);

/// Problem data for i u_t + Delta u + mu |x|^{-b} |u|^alpha u = 0.
struct ProblemParams {
  int n = 1;         // dimension
  double alpha = 1;  // nonlinearity power, > 0
  double b = 0.1;    // potential decay, 0 < b < min{2, n}
  int mu = -1;       // +1 focusing, -1 defocusing
  std::optional<double> p;  // modulation exponent for M^{p,p'} data
  std::optional<double> N;  // high-low split parameter, > 1

  double mass_critical_alpha() const { return (4.0 - 2.0 * b) / n; }
};

/// Input norms for the data-dependent quantities (local time, ball radii,
/// window conditions). data_l2_plus_mod is an upper-bound proxy for the
/// infimum defining || . ||_{L^2 + M}: callers pass min(||u||_2, ||u||_M)
/// or ||phi||_2 + ||psi||_M after a split.
struct NormInputs {
  std::optional<double> data_l2_plus_mod;
  std::optional<double> phi_l2;
  std::optional<double> psi_mod;
};

struct AdmissiblePair {
  double q = 0, r = 0;
  bool admissible = false;
  bool endpoint = false;  // r sits exactly on the dimensional endpoint
};

/// Every closed-form parameter for a given (n, alpha, b, p, N).
/// theta is the exponent (4-2b-n alpha)/4 - n(4-2b-n alpha)/(4(alpha+2)(n+2-b))
/// that powers the local time, the window conditions and T(N).
struct ExponentReport {
  int n = 0;
  double alpha = 0, b = 0;
  double s_b = 0;
  double b_tilde = 0;
  bool b_tilde_strict = false;  // n == 2: the b-range is open at b_tilde

  AdmissiblePair pair1;  // (gamma_1, rho_1) = (4(alpha+2)/(n alpha), alpha+2)
  AdmissiblePair pair2;  // (gamma_2, rho_2) from the ball piece
  double gamma1_prime = 0, rho1_prime = 0;
  double theta = 0;      // = 1/q_1, positive under the hypotheses
  double q1_inv = 0;     // same value, kept under the name used in reports

  double delta = 0;      // alpha - n alpha^2/(4(alpha+2)) - theta
  double eta = 0;        // theta/delta when delta > 0, else +inf
  double beta_max = 0;   // upper end of the admissible beta range
  double p_max = 0;      // always > 2
  bool p_max_branch_eta = false;

  std::optional<double> p;
  std::optional<double> beta;    // (1/2 - 1/p)/(1/p - 1/(alpha+2))
  std::optional<double> N;
  std::optional<double> T_window;  // T(N) = (3 C N^beta)^{-alpha/theta}

  std::optional<double> T_local;   // min{1, C ||u_0||^{-alpha/theta}}
  std::optional<double> ball_a;    // a = C ||u_0||_{L^2+M}
  std::optional<double> ball_A;    // A = (3/C) T^{n alpha/(4(alpha+2))} ||psi||_M

  // Window-length conditions for the perturbed solve, evaluated when the
  // norms and a tentative T are available.
  std::optional<double> c2_rhs;  // C (||phi||_2 + ||psi||_M)^{-alpha/theta}
  std::optional<double> c3_rhs;  // C ||psi||_M^{-alpha/(theta + n alpha^2/(4(alpha+2)))}
  std::optional<bool> c1_ok, c2_ok, c3_ok;

  double duhamel_exponent_ball = 0;   // 1 - n alpha/4, the B^c time power
  double growth_exponent = 0;         // n alpha/(4(alpha+2)), perturbation growth
  std::vector<std::string> warnings;

  std::string to_table() const;
  std::string to_json() const;
};

/// s_b = n/2 - (2-b)/alpha, the critical Sobolev index. Rejects alpha = 0.
double critical_index(const ProblemParams& params);

/// Three-branch threshold for the admissible b-range:
/// (3-sqrt 7)/2 for n=1, 2-sqrt 2 for n=2, (n+6-sqrt((n+6)^2-32))/4 for n>=3.
double b_tilde(int n);

/// True iff 1/q = (n/2)(1/2 - 1/r) with r in the dimensional range
/// (closed endpoint 2n/(n-2) for n >= 3, open infinity for n = 2,
/// closed infinity for n = 1). Accepts inf for either exponent.
AdmissiblePair admissible(double q, double r, int n);

/// Range of the split exponent beta and the resulting p-range:
/// beta in (0, eta) when delta > 0 (then p_max is the eta branch), else
/// (0, inf) and p_max = alpha + 2. Returns (beta_max, p_max, eta_branch).
struct BetaRange {
  double beta_max = 0;
  double p_max = 0;
  bool eta_branch = false;
};
BetaRange beta_range(const ProblemParams& params);

/// Validates every hypothesis and evaluates all derived parameters.
/// contraction_C is the calibrated constant C(n, alpha, b), a configuration
/// input with documented default 1.0, never hard-coded in the formulas.
/// T_candidate, when given, is checked against conditions (c1)-(c3).
ExponentReport derive_all(const ProblemParams& params, const NormInputs& norms = {},
                          double contraction_C = 1.0,
                          std::optional<double> T_candidate = std::nullopt);

}  // namespace inls
