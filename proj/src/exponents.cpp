#include "inls/exponents.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "inls/errors.hpp"

namespace inls {

namespace {

std::string fmt(double v) {
  if (v == kInf) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_json(double v) {
  if (v == kInf) return "\"inf\"";
  return fmt(v);
}

constexpr double kEndpointTol = 1e-9;

}  // namespace

double conjugate_exponent(double p) {
  if (p == 1.0) return kInf;
  if (p == kInf) return 1.0;
  return p / (p - 1.0);
}

double critical_index(const ProblemParams& params) {
  if (!(params.alpha > 0)) throw HypothesisError({"alpha must be positive"});
  return params.n / 2.0 - (2.0 - params.b) / params.alpha;
}

double b_tilde(int n) {
  if (n < 1) throw HypothesisError({"dimension must be >= 1"});
  if (n == 1) return (3.0 - std::sqrt(7.0)) / 2.0;
  if (n == 2) return 2.0 - std::sqrt(2.0);
  const double d = n + 6.0;
  return (d - std::sqrt(d * d - 32.0)) / 4.0;
}

AdmissiblePair admissible(double q, double r, int n) {
  AdmissiblePair out{q, r, false, false};
  if (!(q >= 1) || !(r >= 1)) return out;
  const double lhs = (q == kInf) ? 0.0 : 1.0 / q;
  const double rinv = (r == kInf) ? 0.0 : 1.0 / r;
  const double rhs = 0.5 * n * (0.5 - rinv);
  const bool scaling = std::abs(lhs - rhs) <= kEndpointTol * std::max(1.0, std::abs(rhs));
  if (!scaling || r < 2.0 - kEndpointTol) return out;
  if (n >= 3) {
    const double r_end = 2.0 * n / (n - 2.0);
    if (r > r_end * (1.0 + kEndpointTol)) return out;
    out.endpoint = std::abs(r - r_end) <= kEndpointTol * r_end;
  } else if (n == 2) {
    if (r == kInf) return out;  // open endpoint
  } else {
    out.endpoint = (r == kInf);
  }
  out.admissible = true;
  return out;
}

BetaRange beta_range(const ProblemParams& params) {
  ExponentReport rep = derive_all(params);
  return BetaRange{rep.beta_max, rep.p_max, rep.p_max_branch_eta};
}

ExponentReport derive_all(const ProblemParams& params, const NormInputs& norms,
                          double contraction_C, std::optional<double> T_candidate) {
  const int n = params.n;
  const double a = params.alpha, b = params.b;

  std::vector<std::string> bad;
  if (n < 1) bad.push_back("dimension must be >= 1");
  if (!(a > 0)) bad.push_back("alpha must be positive");
  if (!(b > 0) || !(b < std::min(2.0, static_cast<double>(n))))
    bad.push_back("potential decay must satisfy 0 < b < min{2, n}, got b = " + fmt(b));
  if (!bad.empty()) throw HypothesisError(std::move(bad));

  const double bt = b_tilde(n);
  const double alpha_mass = (4.0 - 2.0 * b) / n;
  if (!(a < alpha_mass))
    bad.push_back("mass-subcriticality fails: alpha = " + fmt(a) + " >= (4-2b)/n = " + fmt(alpha_mass));
  if (n == 2 ? !(b < bt) : !(b <= bt))
    bad.push_back(std::string("b exceeds b-tilde: b = ") + fmt(b) + (n == 2 ? " >= " : " > ") + fmt(bt));
  if (!(contraction_C > 0)) bad.push_back("contraction constant must be positive");
  if (!bad.empty()) throw HypothesisError(std::move(bad));

  ExponentReport rep;
  rep.n = n;
  rep.alpha = a;
  rep.b = b;
  rep.s_b = critical_index(params);
  rep.b_tilde = bt;
  rep.b_tilde_strict = (n == 2);

  // Outside-the-ball pair: rho_1 = alpha+2, always admissible under the hypotheses.
  const double rho1 = a + 2.0;
  const double gamma1 = 4.0 * (a + 2.0) / (n * a);
  rep.pair1 = admissible(gamma1, rho1, n);
  rep.gamma1_prime = conjugate_exponent(gamma1);
  rep.rho1_prime = conjugate_exponent(rho1);

  // Inside-the-ball pair from the singular-weight Hoelder bookkeeping.
  // The rho_2 denominator vanishes exactly at b = b_tilde for n in {1, 2};
  // a near-zero value is the r = inf endpoint, not a finite exponent.
  const double gamma2 = 4.0 * (n + 2.0 - b) / (2.0 * n + 4.0 * b + b * n - 2.0 * b * b);
  const double rho2_den = n * n - 2.0 * n * b - 4.0 * b + 2.0 * b * b;
  const double rho2 = rho2_den > 1e-9 * n * n ? 2.0 * n * (n + 2.0 - b) / rho2_den : kInf;
  rep.pair2 = admissible(gamma2, rho2, n);
  if (!rep.pair2.admissible)
    rep.warnings.push_back("(gamma_2, rho_2) failed the admissibility check");
  if (rep.pair2.endpoint)
    rep.warnings.push_back("(gamma_2, rho_2) sits on the Strichartz endpoint (b = b-tilde)");

  // theta = (4-2b-n alpha)/4 * (1 - n/((alpha+2)(n+2-b))), the T-power of the
  // nonlinear estimate; written factored to keep it well-conditioned near zero.
  const double head = (4.0 - 2.0 * b - n * a) / 4.0;
  rep.theta = head * (1.0 - n / ((a + 2.0) * (n + 2.0 - b)));
  rep.q1_inv = rep.theta;
  if (!(rep.theta > 0)) throw HypothesisError({"1/q_1 must be positive, got " + fmt(rep.theta)});

  rep.duhamel_exponent_ball = 1.0 - n * a / 4.0;
  rep.growth_exponent = n * a / (4.0 * (a + 2.0));

  // beta range and p_max.
  rep.delta = a - n * a * a / (4.0 * (a + 2.0)) - rep.theta;
  if (rep.delta > 0) {
    rep.eta = rep.theta / rep.delta;
    rep.beta_max = rep.eta;
    rep.p_max = (4.0 * a + 8.0 - n * a) /
                (2.0 * a + 2.0 + b + n * (4.0 - 2.0 * b - n * a) / (2.0 * (a + 2.0) * (n + 2.0 - b)));
    rep.p_max_branch_eta = true;
  } else {
    rep.eta = kInf;
    rep.beta_max = kInf;
    rep.p_max = a + 2.0;
    rep.p_max_branch_eta = false;
  }
  if (!(rep.p_max > 2.0)) throw HypothesisError({"p_max must exceed 2, got " + fmt(rep.p_max)});

  if (params.p) {
    const double p = *params.p;
    if (!(p >= 2.0) || !(p < a + 2.0))
      throw HypothesisError({"modulation exponent p must lie in [2, alpha+2), got " + fmt(p)});
    if (!(p > 2.0 && p < rep.p_max))
      rep.warnings.push_back("p = " + fmt(p) + " outside the global range (2, p_max = " + fmt(rep.p_max) + ")");
    rep.p = p;
    rep.beta = (0.5 - 1.0 / p) / (1.0 / p - 1.0 / (a + 2.0));
    if (params.N) {
      if (!(*params.N > 1)) throw HypothesisError({"split parameter N must exceed 1"});
      rep.N = *params.N;
      rep.T_window = std::pow(3.0 * contraction_C * std::pow(*params.N, *rep.beta), -a / rep.theta);
    }
  }

  if (norms.data_l2_plus_mod) {
    const double u0 = *norms.data_l2_plus_mod;
    rep.ball_a = contraction_C * u0;
    rep.T_local = std::min(1.0, contraction_C * std::pow(u0, -a / rep.theta));
  }
  if (norms.phi_l2 && norms.psi_mod) {
    rep.c2_rhs = contraction_C * std::pow(*norms.phi_l2 + *norms.psi_mod, -a / rep.theta);
  }
  if (norms.psi_mod) {
    rep.c3_rhs = contraction_C *
                 std::pow(*norms.psi_mod, -a / (rep.theta + n * a * a / (4.0 * (a + 2.0))));
  }
  if (T_candidate) {
    const double T = *T_candidate;
    rep.c1_ok = (T <= 1.0);
    if (rep.c2_rhs) rep.c2_ok = (T <= *rep.c2_rhs);
    if (rep.c3_rhs) rep.c3_ok = (T <= *rep.c3_rhs);
    if (norms.psi_mod)
      rep.ball_A = (3.0 / contraction_C) * std::pow(T, rep.growth_exponent) * *norms.psi_mod;
  }
  return rep;
}

std::string ExponentReport::to_table() const {
  std::ostringstream os;
  auto row = [&](const std::string& k, const std::string& v) {
    os << "  " << k;
    for (std::size_t i = k.size(); i < 22; ++i) os << ' ';
    os << v << "\n";
  };
  os << "exponent report (n = " << n << ", alpha = " << fmt(alpha) << ", b = " << fmt(b) << ")\n";
  row("s_b", fmt(s_b));
  row("b_tilde", fmt(b_tilde) + (b_tilde_strict ? "  (strict)" : ""));
  row("(gamma_1, rho_1)", "(" + fmt(pair1.q) + ", " + fmt(pair1.r) + ")" +
                              (pair1.admissible ? " admissible" : " NOT admissible"));
  row("(gamma_2, rho_2)", "(" + fmt(pair2.q) + ", " + fmt(pair2.r) + ")" +
                              (pair2.admissible ? " admissible" : " NOT admissible") +
                              (pair2.endpoint ? " endpoint" : ""));
  row("1/q_1", fmt(q1_inv));
  row("delta", fmt(delta));
  row("eta", fmt(eta));
  row("p_max", fmt(p_max) + (p_max_branch_eta ? "  (eta branch)" : "  (alpha+2 branch)"));
  if (p) row("p", fmt(*p));
  if (beta) row("beta", fmt(*beta));
  if (N) row("N", fmt(*N));
  if (T_window) row("T(N)", fmt(*T_window));
  if (T_local) row("T_local", fmt(*T_local));
  if (ball_a) row("a", fmt(*ball_a));
  if (ball_A) row("A", fmt(*ball_A));
  if (c2_rhs) row("c2 bound", fmt(*c2_rhs));
  if (c3_rhs) row("c3 bound", fmt(*c3_rhs));
  if (c1_ok) row("c1", *c1_ok ? "ok" : "VIOLATED");
  if (c2_ok) row("c2", *c2_ok ? "ok" : "VIOLATED");
  if (c3_ok) row("c3", *c3_ok ? "ok" : "VIOLATED");
  row("1 - n alpha/4", fmt(duhamel_exponent_ball));
  row("n alpha/(4(alpha+2))", fmt(growth_exponent));
  for (const auto& w : warnings) os << "  warning: " << w << "\n";
  return os.str();
}

std::string ExponentReport::to_json() const {
  std::ostringstream os;
  os << "{";
  os << "\"n\":" << n << ",\"alpha\":" << fmt(alpha) << ",\"b\":" << fmt(b);
  os << ",\"s_b\":" << fmt(s_b) << ",\"b_tilde\":" << fmt(b_tilde)
     << ",\"b_tilde_strict\":" << (b_tilde_strict ? "true" : "false");
  auto pair = [&](const char* name, const AdmissiblePair& pr) {
    os << ",\"" << name << "\":{\"q\":" << fmt_json(pr.q) << ",\"r\":" << fmt_json(pr.r)
       << ",\"admissible\":" << (pr.admissible ? "true" : "false")
       << ",\"endpoint\":" << (pr.endpoint ? "true" : "false") << "}";
  };
  pair("pair1", pair1);
  pair("pair2", pair2);
  os << ",\"q1_inv\":" << fmt(q1_inv) << ",\"theta\":" << fmt(theta)
     << ",\"delta\":" << fmt(delta) << ",\"eta\":" << fmt_json(eta)
     << ",\"beta_max\":" << fmt_json(beta_max) << ",\"p_max\":" << fmt(p_max)
     << ",\"p_max_branch_eta\":" << (p_max_branch_eta ? "true" : "false");
  auto opt = [&](const char* name, const std::optional<double>& v) {
    if (v) os << ",\"" << name << "\":" << fmt(*v);
  };
  opt("p", p);
  opt("beta", beta);
  opt("N", N);
  opt("T_window", T_window);
  opt("T_local", T_local);
  opt("ball_a", ball_a);
  opt("ball_A", ball_A);
  opt("c2_rhs", c2_rhs);
  opt("c3_rhs", c3_rhs);
  auto optb = [&](const char* name, const std::optional<bool>& v) {
    if (v) os << ",\"" << name << "\":" << (*v ? "true" : "false");
  };
  optb("c1_ok", c1_ok);
  optb("c2_ok", c2_ok);
  optb("c3_ok", c3_ok);
  os << ",\"duhamel_exponent_ball\":" << fmt(duhamel_exponent_ball)
     << ",\"growth_exponent\":" << fmt(growth_exponent);
  os << ",\"warnings\":[";
  for (std::size_t i = 0; i < warnings.size(); ++i)
    os << (i ? "," : "") << "\"" << warnings[i] << "\"";
  os << "]}";
  return os.str();
}

}  // namespace inls
