#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "inls/errors.hpp"
#include "inls/exponents.hpp"

using namespace inls;

namespace {
ProblemParams params(int n, double alpha, double b) {
  ProblemParams p;
  p.n = n;
  p.alpha = alpha;
  p.b = b;
  return p;
}

// splitmix64-backed uniform, deterministic across platforms
struct Rng {
  std::uint64_t s;
  double operator()() {
    s += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return ((z ^ (z >> 31)) >> 11) * 0x1p-53;
  }
};
}  // namespace

TEST_CASE("critical index") {
  CHECK(critical_index(params(1, 2, 0.0)) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(critical_index(params(2, 1, 0.5)) == doctest::Approx(-0.5).epsilon(1e-14));
  // mass-critical alpha gives s_b = 0
  const double b = 0.3;
  CHECK(critical_index(params(2, (4 - 2 * b) / 2.0, b)) == doctest::Approx(0.0).epsilon(1e-14));
  ProblemParams bad = params(1, 0, 0.1);
  CHECK_THROWS_AS(critical_index(bad), HypothesisError);
}

TEST_CASE("b_tilde branches against 50-digit evaluations") {
  CHECK(b_tilde(1) == doctest::Approx(0.17712434446770470475).epsilon(1e-15));
  CHECK(b_tilde(2) == doctest::Approx(0.58578643762690495120).epsilon(1e-15));
  CHECK(b_tilde(3) == doctest::Approx(0.5).epsilon(1e-15));  // (9 - sqrt 49)/4
  CHECK(b_tilde(4) == doctest::Approx((10.0 - std::sqrt(68.0)) / 4.0).epsilon(1e-15));
}

TEST_CASE("admissible pairs per the dimensional ranges") {
  for (int n : {1, 2, 3}) CHECK(admissible(kInf, 2, n).admissible);
  CHECK(admissible(2, 6, 3).admissible);        // n = 3 endpoint
  CHECK(admissible(2, 6, 3).endpoint);
  CHECK_FALSE(admissible(1, kInf, 2).admissible);  // r = inf excluded for n = 2
  CHECK(admissible(4, kInf, 1).admissible);        // closed for n = 1
  CHECK_FALSE(admissible(3, 4, 1).admissible);     // scaling relation fails
  CHECK_FALSE(admissible(2, 1.5, 1).admissible);   // r < 2
}

TEST_CASE("derive_all at (n, alpha, b) = (1, 1, 0.1): hand-evaluated values") {
  ExponentReport rep = derive_all(params(1, 1, 0.1));
  // (gamma_2, rho_2) = (11.6/2.48, 5.8/0.42), re-checked through Def 2.6
  CHECK(rep.pair2.q == doctest::Approx(4.6774193548387096774).epsilon(1e-14));
  CHECK(rep.pair2.r == doctest::Approx(13.809523809523809524).epsilon(1e-14));
  CHECK(rep.pair2.admissible);
  CHECK_FALSE(rep.pair2.endpoint);
  // 1/q_1 = (4 - 0.2 - 1)/4 - 2.8/(4*3*2.9) > 0
  CHECK(rep.q1_inv == doctest::Approx(0.61954022988505747126).epsilon(1e-14));
  CHECK(rep.q1_inv > 0);
  // Y pair
  CHECK(rep.pair1.q == doctest::Approx(12.0).epsilon(1e-14));
  CHECK(rep.pair1.r == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(rep.pair1.admissible);
  CHECK(rep.s_b == doctest::Approx(0.5 - 1.9).epsilon(1e-14));
}

TEST_CASE("beta vanishes at p = 2 and beta range branches") {
  ProblemParams pp = params(1, 1, 0.1);
  pp.p = 2.0;
  ExponentReport rep = derive_all(pp);
  CHECK(*rep.beta == doctest::Approx(0.0));
  CHECK_FALSE(rep.warnings.empty());  // p = 2 is outside (2, p_max), warned not fatal

  // the branch condition holds at (1, 1, 0.1): eta branch with a finite range
  BetaRange br = beta_range(params(1, 1, 0.1));
  CHECK(br.eta_branch);
  CHECK(std::isfinite(br.beta_max));
  CHECK(br.p_max > 2.0);
  CHECK(br.p_max < 3.0);

  // small alpha flips the sign: the range is unbounded and p_max = alpha + 2
  BetaRange flat = beta_range(params(1, 0.3, 0.05));
  CHECK_FALSE(flat.eta_branch);
  CHECK(flat.beta_max == kInf);
  CHECK(flat.p_max == doctest::Approx(2.3).epsilon(1e-14));
}

TEST_CASE("p_max consistency: both displayed forms agree, and p_max > 2") {
  Rng rng{12345};
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() * 3);
    const double bt = b_tilde(n);
    const double b = 0.005 + rng() * (0.99 * bt - 0.005);
    const double alpha = 0.05 + rng() * (0.95 * (4 - 2 * b) / n - 0.05);
    ExponentReport rep = derive_all(params(n, alpha, b));
    CHECK(rep.p_max > 2.0);
    if (rep.p_max_branch_eta) {
      // Remark form: p_max = 2 / (1 - 4 theta/(4 alpha + 8 - n alpha))
      const double zeta = rep.theta;
      const double alt = 2.0 / (1.0 - 4.0 * zeta / (4 * alpha + 8 - n * alpha));
      CHECK(rep.p_max == doctest::Approx(alt).epsilon(1e-12));
      // beta(p_max) = eta
      const double beta_at_pmax =
          (0.5 - 1.0 / rep.p_max) / (1.0 / rep.p_max - 1.0 / (alpha + 2));
      CHECK(beta_at_pmax == doctest::Approx(rep.eta).epsilon(1e-10));
    } else {
      CHECK(rep.p_max == doctest::Approx(alpha + 2).epsilon(1e-14));
    }
  }
}

TEST_CASE("rho_2 range: >= 2 always, <= 2n/(n-2) for n >= 3 under b <= b_tilde") {
  Rng rng{777};
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() * 4);
    const double bt = b_tilde(n);
    const double b = 0.005 + rng() * (0.99 * bt - 0.005);
    const double alpha = 0.05 + rng() * (0.9 * (4 - 2 * b) / n - 0.05);
    ExponentReport rep = derive_all(params(n, alpha, b));
    CHECK(rep.pair2.r >= 2.0 - 1e-12);
    if (n >= 3) CHECK(rep.pair2.r <= 2.0 * n / (n - 2.0) + 1e-9);
    CHECK(rep.pair2.admissible);
  }
}

TEST_CASE("endpoint flag at b = b_tilde") {
  // n = 1: rho_2 = inf at b = b_tilde(1), allowed (closed endpoint), flagged
  ExponentReport rep = derive_all(params(1, 0.5, b_tilde(1)));
  CHECK(rep.pair2.admissible);
  CHECK(rep.pair2.endpoint);
  CHECK_FALSE(rep.warnings.empty());
  // n = 3: rho_2 = 2n/(n-2) = 6 exactly
  ExponentReport rep3 = derive_all(params(3, 0.3, 0.5));
  CHECK(rep3.pair2.r == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(rep3.pair2.admissible);
  CHECK(rep3.pair2.endpoint);
  // n = 2 must reject b = b_tilde (open range)
  CHECK_THROWS_AS(derive_all(params(2, 0.5, b_tilde(2))), HypothesisError);
}

TEST_CASE("window length and c3 exponent signs: T(N) -> 0, c3 bound -> inf") {
  ProblemParams pp = params(1, 1, 0.1);
  pp.p = 2.05;
  ExponentReport rep = derive_all(pp);
  // T(N) = (3 C N^beta)^{-alpha/theta}: exponent of N is -alpha beta/theta < 0
  CHECK(-pp.alpha * *rep.beta / rep.theta < 0);
  // c3 right side with ||psi|| ~ C/N is N^{+alpha/(theta + n alpha^2/(4(alpha+2)))}
  CHECK(pp.alpha / (rep.theta + pp.n * pp.alpha * pp.alpha / (4 * (pp.alpha + 2))) > 0);
  // both condition exponents are negative
  CHECK(-pp.alpha / rep.theta < 0);
  CHECK(-pp.alpha / (rep.theta + pp.n * pp.alpha * pp.alpha / (4 * (pp.alpha + 2))) < 0);
  // realized numerically: T(N) decreasing in N
  pp.N = 4;
  const double t4 = *derive_all(pp).T_window;
  pp.N = 16;
  const double t16 = *derive_all(pp).T_window;
  CHECK(t16 < t4);
}

TEST_CASE("structured diagnostics name the failed inequality") {
  try {
    derive_all(params(1, 3.9, 0.1));  // alpha >= (4-2b)/n
    CHECK(false);
  } catch (const HypothesisError& e) {
    REQUIRE(!e.violations().empty());
    CHECK(e.violations()[0].find("mass-subcriticality") != std::string::npos);
  }
  try {
    derive_all(params(2, 0.5, 1.5));  // b > b_tilde(2) but < min{2, n}
    CHECK(false);
  } catch (const HypothesisError& e) {
    bool found = false;
    for (const auto& v : e.violations()) found = found || v.find("b-tilde") != std::string::npos;
    CHECK(found);
  }
  CHECK_THROWS_AS(derive_all(params(1, 1.0, 1.2)), HypothesisError);  // b >= min{2, n}
}

TEST_CASE("local time and condition bounds react to the supplied norms") {
  ProblemParams pp = params(1, 1, 0.1);
  pp.p = 2.05;
  pp.N = 8;
  NormInputs norms;
  norms.data_l2_plus_mod = 2.0;
  norms.phi_l2 = 1.5;
  norms.psi_mod = 0.25;
  ExponentReport rep = derive_all(pp, norms, 1.0, 0.05);
  REQUIRE(rep.T_local);
  CHECK(*rep.T_local == doctest::Approx(std::min(1.0, std::pow(2.0, -1.0 / rep.theta))).epsilon(1e-13));
  REQUIRE(rep.c2_rhs);
  CHECK(*rep.c2_rhs == doctest::Approx(std::pow(1.75, -1.0 / rep.theta)).epsilon(1e-13));
  REQUIRE(rep.ball_A);
  CHECK(*rep.ball_A ==
        doctest::Approx(3.0 * std::pow(0.05, rep.growth_exponent) * 0.25).epsilon(1e-13));
  CHECK(rep.c1_ok.value());
  REQUIRE(rep.T_window);
  CHECK(*rep.T_window ==
        doctest::Approx(std::pow(3.0 * std::pow(8.0, *rep.beta), -1.0 / rep.theta)).epsilon(1e-13));
}
