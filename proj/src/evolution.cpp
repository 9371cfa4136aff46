#include "inls/evolution.hpp"

#include <cmath>
#include <stdexcept>

#include "inls/errors.hpp"

namespace inls {

namespace {

// Gauss-Legendre 16-point nodes/weights on [-1, 1].
constexpr int kGL = 16;
constexpr double kGLx[kGL] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
constexpr double kGLw[kGL] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

double gl_2d(double xlo, double xhi, double ylo, double yhi, double b) {
  const double xm = 0.5 * (xlo + xhi), xr = 0.5 * (xhi - xlo);
  const double ym = 0.5 * (ylo + yhi), yr = 0.5 * (yhi - ylo);
  double acc = 0;
  for (int i = 0; i < kGL; ++i) {
    const double x = xm + xr * kGLx[i];
    double row = 0;
    for (int j = 0; j < kGL; ++j) {
      const double y = ym + yr * kGLx[j];
      row += kGLw[j] * std::pow(x * x + y * y, -0.5 * b);
    }
    acc += kGLw[i] * row;
  }
  return acc * xr * yr;
}

// Cell average of |x|^{-b} over the origin cell [-h/2, h/2]^n.
// 1D closed form; 2D by dyadic shells around the corner singularity.
double origin_cell_average(int dim, double h, double b) {
  if (dim == 1) return std::pow(0.5 * h, -b) / (1.0 - b);
  const double a = 0.5 * h;  // quadrant [0, a]^2, integral times 4
  double integral = 0;
  double hi = a;
  for (int shell = 0; shell < 60; ++shell) {
    const double lo = hi * 0.5;
    // L-shaped shell {max(x,y) in (lo, hi]} split into two rectangles.
    integral += gl_2d(lo, hi, 0.0, hi, b);
    integral += gl_2d(0.0, lo, lo, hi, b);
    hi = lo;
    if (hi < 1e-18 * a) break;
  }
  // Remaining corner square [0, hi]^2: |x|^{-b} <= r^{-b}, contributes
  // O(hi^{2-b}) which is below double precision at the loop exit.
  return 4.0 * integral / (h * h);
}

}  // namespace

SingularWeight::SingularWeight(const GridSpec& g, double b, Regularization mode)
    : grid_(g), b_(b), mode_(mode) {
  if (!(b > 0) || !(b < std::min(2.0, static_cast<double>(g.dim))))
    throw HypothesisError({"singular weight needs 0 < b < min{2, n}"});
  const double h = g.mesh();
  samples_.resize(g.size());
  const double origin_value = mode == Regularization::CellAverage
                                  ? origin_cell_average(g.dim, h, b)
                                  : std::pow(h, -b);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double x0, x1;
    g.coords(i, x0, x1);
    const double r = std::sqrt(x0 * x0 + x1 * x1);
    samples_[i] = (r < h) ? origin_value : std::pow(r, -b);
  }
}

SingularWeight SingularWeight::unit(const GridSpec& g) {
  return SingularWeight(g, 0.0, Regularization::CellAverage, RVec::Ones(g.size()));
}

SingularWeight SingularWeight::zero(const GridSpec& g) {
  return SingularWeight(g, 0.0, Regularization::CellAverage, RVec::Zero(g.size()));
}

const char* SingularWeight::mode_name() const {
  return mode_ == Regularization::CellAverage ? "cell-average" : "hard-cap";
}

SpectralField propagate(const SpectralField& f, double t) {
  const GridSpec& g = f.grid();
  CVec c = f.frequency();
  for (std::size_t i = 0; i < g.size(); ++i)
    c[i] *= std::polar(1.0, M_PI * t * g.freq_sq(i));
  return SpectralField::from_frequency(g, std::move(c));
}

SpectralField evolve_free(const SpectralField& f, double t) { return propagate(f, -t / M_PI); }

SpectralField nonlinearity(const SpectralField& f, const SingularWeight& w, double alpha, int mu) {
  if (!(alpha > 0)) throw std::invalid_argument("nonlinearity: alpha must be positive");
  if (!(f.grid() == w.grid())) throw std::invalid_argument("nonlinearity: grid mismatch");
  CVec v = f.physical();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v[i] *= mu * w.samples()[i] * std::pow(std::abs(v[i]), alpha);
  return SpectralField::from_physical(f.grid(), std::move(v));
}

Complex g_difference_scalar(Complex u, Complex v, Complex w, double alpha) {
  const Complex uv = u + v, uw = u + w;
  return std::pow(std::abs(uv), alpha) * uv - std::pow(std::abs(uw), alpha) * uw;
}

SpectralField g_difference(const SpectralField& u, const SpectralField& v,
                           const SpectralField& w, double alpha) {
  if (!(alpha > 0)) throw std::invalid_argument("g_difference: alpha must be positive");
  if (!(u.grid() == v.grid()) || !(u.grid() == w.grid()))
    throw std::invalid_argument("g_difference: grid mismatch");
  const CVec &a = u.physical(), &bb = v.physical(), &cc = w.physical();
  CVec out(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out[i] = g_difference_scalar(a[i], bb[i], cc[i], alpha);
  return SpectralField::from_physical(u.grid(), std::move(out));
}

double energy(const SpectralField& f, const SingularWeight& w, double alpha, int mu) {
  const GridSpec& g = f.grid();
  if (!(g == w.grid())) throw std::invalid_argument("energy: grid mismatch");
  const CVec& c = f.frequency();
  double kinetic = 0;
  for (std::size_t i = 0; i < g.size(); ++i) kinetic += g.freq_sq(i) * std::norm(c[i]);
  kinetic /= std::pow(2.0 * g.half_width, g.dim);

  const CVec& v = f.physical();
  const double hn = std::pow(g.mesh(), g.dim);
  double potential = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    potential += w.samples()[i] * std::pow(std::abs(v[i]), alpha + 2.0);
  potential *= hn;
  return kinetic - (2.0 * mu / (alpha + 2.0)) * potential;
}

}  // namespace inls
