#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "inls/errors.hpp"
#include "inls/exponents.hpp"
#include "inls/grid.hpp"
#include "inls/solver.hpp"

using namespace inls;

namespace {

SpectralField gaussian(const GridSpec& g, double width = 1.0, double carrier = 0.0) {
  CVec v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double x, y;
    g.coords(i, x, y);
    v[i] = std::exp(-(x * x + y * y) / (width * width)) * std::polar(1.0, carrier * x);
  }
  return SpectralField::from_physical(g, v);
}

}  // namespace

TEST_CASE("make_grid accepts the documented shapes and rejects the rest") {
  GridSpec g = make_grid(1, 16, M_PI);
  CHECK(g.mesh() == doctest::Approx(2 * M_PI / 16).epsilon(1e-15));
  CHECK(g.freq(8) == doctest::Approx(-8.0).epsilon(1e-15));  // (pi/L) * (-8), L = pi
  CHECK(g.freq(7) == doctest::Approx(7.0).epsilon(1e-15));

  GridSpec g2 = make_grid(2, 32, 10.0);
  CHECK(g2.size() == 1024);
  CHECK(g2.freq(1) == doctest::Approx(M_PI / 10.0).epsilon(1e-15));

  CHECK(g.mesh() * g.pts == 2 * g.half_width);  // exact for power-of-two m

  CHECK_THROWS_AS(make_grid(3, 16, 1.0), HypothesisError);
  CHECK_THROWS_AS(make_grid(1, 12, 1.0), HypothesisError);
  CHECK_THROWS_AS(make_grid(1, 8, 1.0), HypothesisError);
  CHECK_THROWS_AS(make_grid(1, 64, 0.0), HypothesisError);
  CHECK_THROWS_AS(make_grid(1, 64, -2.0), HypothesisError);
}

TEST_CASE("transform round trip and Parseval on randomized fields") {
  for (int n : {1, 2}) {
    for (int m : {16, 64}) {
      GridSpec g = make_grid(n, m, 7.5);
      SpectralField f = random_field(g, 42 + n * 100 + m);
      CVec back = inverse_transform(g, f.frequency());
      const double rel = (back - f.physical()).norm() / f.physical().norm();
      CHECK(rel <= 1e-12);
      CHECK(std::abs(lp_norm(f, 2) - l2_frequency(f)) <= 1e-12 * lp_norm(f, 2));
    }
  }
}

TEST_CASE("lp_norm closed forms") {
  GridSpec g = make_grid(1, 16, M_PI);
  SpectralField one = SpectralField::from_physical(g, CVec::Ones(g.size()));
  CHECK(lp_norm(one, 2) == doctest::Approx(std::sqrt(2 * M_PI)).epsilon(1e-14));
  CHECK(lp_norm(one, kInf) == doctest::Approx(1.0));

  // ||e^{-x^2}||_2 = (pi/2)^{1/4}, value from a 50-digit evaluation
  GridSpec gg = make_grid(1, 1024, 20.0);
  SpectralField gs = gaussian(gg);
  CHECK(lp_norm(gs, 2) == doctest::Approx(1.1195151349202476285).epsilon(1e-10));

  CHECK_THROWS_AS(lp_norm(one, 0.5), std::invalid_argument);
}

TEST_CASE("hs_norm: weight cases and the zero-mode guard") {
  GridSpec g = make_grid(1, 256, 10.0);
  SpectralField f = random_field(g, 9);
  CHECK(hs_norm(f, 0, false) == doctest::Approx(lp_norm(f, 2)).epsilon(1e-12));
  CHECK(hs_norm(f, 0, true) == doctest::Approx(lp_norm(f, 2)).epsilon(1e-12));

  // single mode: |xi_0| * ||e^{i xi_0 x}||_2
  const double xi0 = (M_PI / g.half_width) * 6;
  CVec mode(g.size());
  for (int j = 0; j < g.pts; ++j) mode[j] = std::polar(1.0, xi0 * g.coord(j));
  SpectralField mf = SpectralField::from_physical(g, mode);
  CHECK(hs_norm(mf, 1, true) == doctest::Approx(xi0 * lp_norm(mf, 2)).epsilon(1e-12));

  // homogeneous negative order needs zero mean
  SpectralField one = SpectralField::from_physical(g, CVec::Ones(g.size()));
  CHECK_THROWS_AS(hs_norm(one, -0.25, true), std::domain_error);
}

TEST_CASE("scaling law: dyadic dilation leaves the critical norm invariant") {
  GridSpec g = make_grid(1, 1024, 20.0);
  ProblemParams pp;
  pp.n = 1;
  pp.alpha = 1;
  pp.b = 0.1;
  const double sb = critical_index(pp);
  CHECK(sb < 0);  // mass-subcritical regime
  SpectralField f = gaussian(g, 2.0, 10.0);  // band-limited, mean-zero carrier
  const double base = hs_norm(f, sb, true);
  for (int lam : {2, 4}) {
    SpectralField fl = dilate(f, lam);
    const double scaled = std::pow(lam, (2.0 - pp.b) / pp.alpha) * hs_norm(fl, sb, true);
    CHECK(std::abs(scaled - base) / base <= 0.02);
  }
  // 2D variant
  GridSpec g2 = make_grid(2, 256, 10.0);
  ProblemParams p2;
  p2.n = 2;
  p2.alpha = 1;
  p2.b = 0.5;
  CVec v(g2.size());
  for (std::size_t i = 0; i < g2.size(); ++i) {
    double x, y;
    g2.coords(i, x, y);
    v[i] = std::exp(-(x * x + y * y) / 4.0) * std::polar(1.0, 8.0 * (x + y));
  }
  SpectralField f2 = SpectralField::from_physical(g2, v);
  const double sb2 = critical_index(p2);
  const double base2 = hs_norm(f2, sb2, true);
  SpectralField f2d = dilate(f2, 2);
  const double scaled2 = std::pow(2.0, (2.0 - p2.b) / p2.alpha) * hs_norm(f2d, sb2, true);
  CHECK(std::abs(scaled2 - base2) / base2 <= 0.02);
}

TEST_CASE("dilate rejects non-dyadic factors and under-resolved fields") {
  GridSpec g = make_grid(1, 64, 5.0);
  SpectralField f = random_field(g, 3);  // band m/4 = 16, dilation by 2 allowed
  CHECK_NOTHROW(dilate(f, 2));
  CHECK_THROWS_AS(dilate(f, 3), std::invalid_argument);
  CHECK_THROWS_AS(dilate(f, 4), std::domain_error);  // band exceeds m/8
}

TEST_CASE("field dump round trip is bit exact") {
  GridSpec g = make_grid(2, 16, 3.0);
  SpectralField f = random_field(g, 77);
  const std::string path = "test_field_dump.bin";
  write_field(path, f, "physical");
  SpectralField r = read_field(path);
  CHECK((r.physical() - f.physical()).norm() == 0.0);
  write_field(path, f, "frequency");
  SpectralField rf = read_field(path);
  CHECK((rf.frequency() - f.frequency()).norm() == 0.0);
  std::remove(path.c_str());
}
