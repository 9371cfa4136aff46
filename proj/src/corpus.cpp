#include "inls/corpus.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace inls {

namespace {

using Gen = std::function<Complex(double, double)>;

Complex gauss(double x, double y, double a, double x0, double y0, double kx, double ky) {
  const double dx = x - x0, dy = y - y0;
  return std::exp(-(dx * dx + dy * dy) / (a * a)) * std::polar(1.0, kx * dx + ky * dy);
}

Complex chirp(double x, double y, double a, double c, double k0) {
  const double r2 = x * x + y * y;
  return std::exp(-r2 / (a * a)) * std::polar(1.0, c * r2 + k0 * x);
}

// Dyadic packet stack: scale-j bump of width 2^{-j}, offset and modulated,
// with slowly decaying weights. These members carry genuinely different
// spatial spreads per frequency block, which the split regressions need.
Complex multiscale(double x, double y, int levels, double w_decay, double k_step, double spread) {
  Complex acc = 0;
  for (int j = 0; j < levels; ++j) {
    const double a = spread * std::pow(2.0, -j);
    const double x0 = (j % 2 ? -1 : 1) * (0.8 * j);
    const double kx = k_step * (j + 1);
    acc += std::pow(2.0, -w_decay * j) * gauss(x, y, a, x0, 0.0, kx, 0.5 * kx);
  }
  return acc;
}

Gen generator(int id) {
  switch (id) {
    // Gaussians
    case 0: return [](double x, double y) { return gauss(x, y, 1.0, 0, 0, 0, 0); };
    case 1: return [](double x, double y) { return gauss(x, y, 0.5, 1.2, -0.7, 0, 0); };
    case 2: return [](double x, double y) { return gauss(x, y, 1.6, 0, 0, 6.0, 2.0); };
    case 3: return [](double x, double y) { return gauss(x, y, 0.35, -2.0, 1.0, -9.0, 4.0); };
    case 4: return [](double x, double y) { return 2.0 * gauss(x, y, 1.1, 0.4, 0.4, 3.0, -3.0); };
    // Chirps
    case 5: return [](double x, double y) { return chirp(x, y, 1.8, 3.0, 0.0); };
    case 6: return [](double x, double y) { return chirp(x, y, 2.0, -4.0, 2.0); };
    case 7: return [](double x, double y) { return chirp(x, y, 1.4, 6.0, -5.0); };
    case 8: return [](double x, double y) { return 1.5 * chirp(x, y, 2.0, 2.0, 8.0); };
    // Bump sums
    case 9:
      return [](double x, double y) {
        return gauss(x, y, 0.6, -2.5, 0, 2, 0) + gauss(x, y, 0.6, 0, 0.5, -3, 1) +
               gauss(x, y, 0.6, 2.5, -0.5, 5, -2);
      };
    case 10:
      return [](double x, double y) {
        return gauss(x, y, 0.4, -3, 0, 0, 0) - 0.8 * gauss(x, y, 0.9, 1.5, 0, 4, 0) +
               Complex(0, 0.5) * gauss(x, y, 0.5, 3.2, 0, -7, 0);
      };
    case 11:
      return [](double x, double y) {
        Complex s = 0;
        for (int q = 0; q < 5; ++q)
          s += std::polar(1.0 / (1 + q), 1.3 * q) * gauss(x, y, 0.5 + 0.2 * q, -3.0 + 1.5 * q, 0.3 * q, 2.0 * q - 4.0, q - 2.0);
        return s;
      };
    case 12:
      return [](double x, double y) {
        return gauss(x, y, 1.3, 0, 0, 0, 0) + 0.5 * gauss(x, y, 0.3, 0, 0, 12.0, 5.0);
      };
    // Single modes (lattice-aligned carriers; pure one-block content)
    case 13: return [](double x, double y) { return std::polar(1.0, 4.0 * M_PI * (x + y) * 0.1); };
    case 14: return [](double x, double y) { return std::polar(0.7, -8.0 * M_PI * x * 0.1 + 2.0 * M_PI * y * 0.1); };
    // Multiscale stacks
    case 15: return [](double x, double y) { return multiscale(x, y, 5, 0.5, 4.0, 1.6); };
    case 16: return [](double x, double y) { return multiscale(x, y, 6, 0.25, 5.0, 2.0); };
    case 17: return [](double x, double y) { return multiscale(x, y, 4, 0.75, 7.0, 1.2); };
    // Trig polynomials with fixed coefficient tables
    case 18:
      return [](double x, double y) {
        Complex s = 0;
        const double ks[6] = {1, 2, 3, 5, 8, 13};
        const double cs[6] = {0.9, -0.7, 0.5, 0.4, -0.3, 0.2};
        for (int q = 0; q < 6; ++q)
          s += cs[q] * std::polar(1.0, 0.7 * q) * gauss(x, y, 1.9, 0, 0, ks[q], 0.5 * ks[q]);
        return s;
      };
    case 19:
      return [](double x, double y) {
        Complex s = 0;
        for (int q = 1; q <= 7; ++q)
          s += (1.0 / q) * gauss(x, y, 2.0, 0.3 * q - 1.0, 0.1 * q, 2.2 * q - 8.0, -1.1 * q + 4.0);
        return s;
      };
    default: throw std::invalid_argument("corpus_member: id must lie in [0, 20)");
  }
}

}  // namespace

SpectralField corpus_member(const GridSpec& g, int id) {
  Gen f = generator(id);
  CVec v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double x, y;
    g.coords(i, x, y);
    v[i] = f(x, g.dim == 2 ? y : 0.0);
  }
  return SpectralField::from_physical(g, std::move(v));
}

std::string corpus_label(int id) {
  static const char* names[kCorpusSize] = {
      "gauss-unit",      "gauss-narrow-off", "gauss-mod",       "gauss-sharp-mod", "gauss-wide-mod",
      "chirp-slow",      "chirp-neg",        "chirp-fast",      "chirp-carrier",   "bumps-3",
      "bumps-mixed",     "bumps-5",          "two-scale",       "mode-low",        "mode-high",
      "multiscale-a",    "multiscale-b",     "multiscale-c",    "trigpoly-a",      "trigpoly-b"};
  if (id < 0 || id >= kCorpusSize) throw std::invalid_argument("corpus_label: bad id");
  return names[id];
}

}  // namespace inls
