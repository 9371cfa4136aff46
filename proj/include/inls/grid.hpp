#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>

namespace inls {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// Uniform periodic grid on [-L, L)^n, n in {1, 2}, m points per axis.
///
/// Sample points      x_j = -L + j h,          h = 2L/m  (exact: m is a power of two).
/// Frequency lattice  xi_k = (pi/L) s(k),      s(k) = k for k < m/2, k - m otherwise,
/// i.e. DFT-ordered angular frequencies spanning (pi/L) {-m/2, ..., m/2 - 1}.
struct GridSpec {
  int dim = 1;           // n
  int pts = 16;          // m, per axis
  double half_width = 1; // L

  double mesh() const { return 2.0 * half_width / pts; }
  std::size_t size() const {
    std::size_t s = static_cast<std::size_t>(pts);
    return dim == 1 ? s : s * s;
  }
  int signed_index(int k) const { return k < pts / 2 ? k : k - pts; }
  double coord(int j) const { return -half_width + j * mesh(); }
  double freq(int k) const { return (M_PI / half_width) * signed_index(k); }

  /// |xi|^2 at flattened DFT index.
  double freq_sq(std::size_t idx) const;
  /// Physical coordinates at flattened index (second component 0 when dim == 1).
  void coords(std::size_t idx, double& x0, double& x1) const;

  bool operator==(const GridSpec& o) const {
    return dim == o.dim && pts == o.pts && half_width == o.half_width;
  }
};

/// Rejects m < 16 or not a power of two, n outside {1,2}, L <= 0.
GridSpec make_grid(int n, int m, double L);

/// Forward transform: hat f(xi_k) = h^n sum_j f(x_j) e^{-i xi_k . x_j},
/// the rectangle-rule approximation of the continuum Fourier integral.
/// Inverse: f(x_j) = (2L)^{-n} sum_k hat f(xi_k) e^{i xi_k . x_j}; exact round trip.
CVec forward_transform(const GridSpec& g, const CVec& physical);
CVec inverse_transform(const GridSpec& g, const CVec& frequency);

/// Complex field on a GridSpec, held in both representations.
/// Immutable after construction; cheap to copy (Eigen vectors), safe to share.
class SpectralField {
public:
  static SpectralField from_physical(const GridSpec& g, CVec values);
  static SpectralField from_frequency(const GridSpec& g, CVec coeffs);
  static SpectralField zero(const GridSpec& g);

  const GridSpec& grid() const { return grid_; }
  const CVec& physical() const { return phys_; }
  const CVec& frequency() const { return freq_; }

private:
  SpectralField(GridSpec g, CVec phys, CVec freq)
      : grid_(g), phys_(std::move(phys)), freq_(std::move(freq)) {}
  GridSpec grid_;
  CVec phys_;
  CVec freq_;
};

/// (sum_j |f(x_j)|^p h^n)^{1/p}; max over samples for p = inf. Rejects p < 1.
double lp_norm(const SpectralField& f, double p);

/// Frequency-side l2 norm with the transform's normalization,
/// ((2L)^{-n} sum_k |hat f|^2)^{1/2}; equals lp_norm(f, 2) by Parseval.
double l2_frequency(const SpectralField& f);

/// Sobolev norm with weight |xi|^s (homogeneous) or (1+|xi|^2)^{s/2}.
/// Homogeneous with s < 0 requires a vanishing zero mode.
double hs_norm(const SpectralField& f, double s, bool homogeneous);

/// Dyadic dilation f(lambda x) by frequency-side spreading: coefficient at
/// xi moves to lambda xi, scaled lambda^{-n/2} so that every weighted-l2
/// frequency norm transforms exactly as the continuum dilation.
/// Requires lambda a power of two and f band-limited to |s(k)| < m/(2 lambda).
SpectralField dilate(const SpectralField& f, int lambda);

/// Field dump: one JSON header line {n, m, L, representation}, then
/// little-endian (re, im) float64 pairs in row-major order.
void write_field(const std::string& path, const SpectralField& f,
                 const std::string& representation = "physical");
SpectralField read_field(const std::string& path);

}  // namespace inls
