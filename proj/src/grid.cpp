#include "inls/grid.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "inls/errors.hpp"

namespace inls {

namespace {

bool power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

Eigen::FFT<double>& local_fft() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

// Unscaled DFT along the y-axis (contiguous runs) of a row-major m x m array.
void dft_axis1(CVec& a, int m, bool fwd) {
  CVec in(m), out(m);
  for (int r = 0; r < m; ++r) {
    in = a.segment(static_cast<std::size_t>(r) * m, m);
    if (fwd) {
      local_fft().fwd(out, in);
    } else {
      local_fft().inv(out, in);
      out *= static_cast<double>(m);  // undo Eigen's 1/m on the inverse
    }
    a.segment(static_cast<std::size_t>(r) * m, m) = out;
  }
}

void dft_axis0(CVec& a, int m, bool fwd) {
  CVec in(m), out(m);
  for (int c = 0; c < m; ++c) {
    for (int r = 0; r < m; ++r) in[r] = a[static_cast<std::size_t>(r) * m + c];
    if (fwd) {
      local_fft().fwd(out, in);
    } else {
      local_fft().inv(out, in);
      out *= static_cast<double>(m);
    }
    for (int r = 0; r < m; ++r) a[static_cast<std::size_t>(r) * m + c] = out[r];
  }
}

// (-1)^{sum of DFT indices}: the phase that recenters x = 0 at sample m/2.
double center_phase(const GridSpec& g, std::size_t idx) {
  int parity;
  if (g.dim == 1) {
    parity = static_cast<int>(idx) & 1;
  } else {
    const int kx = static_cast<int>(idx) / g.pts, ky = static_cast<int>(idx) % g.pts;
    parity = (kx + ky) & 1;
  }
  return parity ? -1.0 : 1.0;
}

}  // namespace

double GridSpec::freq_sq(std::size_t idx) const {
  if (dim == 1) {
    const double x = freq(static_cast<int>(idx));
    return x * x;
  }
  const double fx = freq(static_cast<int>(idx) / pts);
  const double fy = freq(static_cast<int>(idx) % pts);
  return fx * fx + fy * fy;
}

void GridSpec::coords(std::size_t idx, double& x0, double& x1) const {
  if (dim == 1) {
    x0 = coord(static_cast<int>(idx));
    x1 = 0.0;
  } else {
    x0 = coord(static_cast<int>(idx) / pts);
    x1 = coord(static_cast<int>(idx) % pts);
  }
}

GridSpec make_grid(int n, int m, double L) {
  std::vector<std::string> bad;
  if (n != 1 && n != 2) bad.push_back("dimension must be 1 or 2, got " + std::to_string(n));
  if (m < 16 || !power_of_two(m))
    bad.push_back("points per axis must be a power of two >= 16, got " + std::to_string(m));
  if (!(L > 0)) bad.push_back("half-width must be positive");
  if (!bad.empty()) throw HypothesisError(std::move(bad));
  return GridSpec{n, m, L};
}

CVec forward_transform(const GridSpec& g, const CVec& physical) {
  if (physical.size() != static_cast<Eigen::Index>(g.size()))
    throw std::invalid_argument("forward_transform: size mismatch");
  CVec a = physical;
  if (g.dim == 1) {
    CVec out;
    local_fft().fwd(out, a);
    a = std::move(out);
  } else {
    dft_axis1(a, g.pts, true);
    dft_axis0(a, g.pts, true);
  }
  const double hn = std::pow(g.mesh(), g.dim);
  for (std::size_t i = 0; i < g.size(); ++i) a[i] *= hn * center_phase(g, i);
  return a;
}

CVec inverse_transform(const GridSpec& g, const CVec& frequency) {
  if (frequency.size() != static_cast<Eigen::Index>(g.size()))
    throw std::invalid_argument("inverse_transform: size mismatch");
  CVec a = frequency;
  for (std::size_t i = 0; i < g.size(); ++i) a[i] *= center_phase(g, i);
  if (g.dim == 1) {
    CVec out;
    local_fft().inv(out, a);
    a = std::move(out);
    a *= static_cast<double>(g.pts);
  } else {
    dft_axis1(a, g.pts, false);
    dft_axis0(a, g.pts, false);
  }
  a /= std::pow(g.mesh(), g.dim) * std::pow(static_cast<double>(g.pts), g.dim);
  return a;
}

SpectralField SpectralField::from_physical(const GridSpec& g, CVec values) {
  if (values.size() != static_cast<Eigen::Index>(g.size()))
    throw std::invalid_argument("SpectralField: size mismatch");
  CVec freq = forward_transform(g, values);
  return SpectralField(g, std::move(values), std::move(freq));
}

SpectralField SpectralField::from_frequency(const GridSpec& g, CVec coeffs) {
  if (coeffs.size() != static_cast<Eigen::Index>(g.size()))
    throw std::invalid_argument("SpectralField: size mismatch");
  CVec phys = inverse_transform(g, coeffs);
  return SpectralField(g, std::move(phys), std::move(coeffs));
}

SpectralField SpectralField::zero(const GridSpec& g) {
  CVec z = CVec::Zero(g.size());
  return SpectralField(g, z, z);
}

double lp_norm(const SpectralField& f, double p) {
  if (!(p >= 1)) throw std::invalid_argument("lp_norm: exponent must be >= 1");
  const CVec& v = f.physical();
  if (std::isinf(p)) {
    double mx = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) mx = std::max(mx, std::abs(v[i]));
    return mx;
  }
  const double hn = std::pow(f.grid().mesh(), f.grid().dim);
  if (p == 2.0) return std::sqrt(v.squaredNorm() * hn);
  double acc = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]), p);
  return std::pow(acc * hn, 1.0 / p);
}

double l2_frequency(const SpectralField& f) {
  const double vol = std::pow(2.0 * f.grid().half_width, f.grid().dim);
  return std::sqrt(f.frequency().squaredNorm() / vol);
}

double hs_norm(const SpectralField& f, double s, bool homogeneous) {
  const GridSpec& g = f.grid();
  const CVec& c = f.frequency();
  if (homogeneous && s < 0) {
    const double l2 = l2_frequency(f);
    if (std::abs(c[0]) > 1e-12 * std::max(l2, 1e-300))
      throw std::domain_error("hs_norm: homogeneous norm with s < 0 needs a vanishing zero mode");
  }
  double acc = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double w2 = g.freq_sq(i);
    double wgt;
    if (s == 0.0) {
      wgt = 1.0;
    } else if (homogeneous) {
      wgt = (w2 == 0.0) ? 0.0 : std::pow(w2, s);  // |xi|^{2s}
    } else {
      wgt = std::pow(1.0 + w2, s);
    }
    acc += wgt * std::norm(c[i]);
  }
  const double vol = std::pow(2.0 * g.half_width, g.dim);
  return std::sqrt(acc / vol);
}

SpectralField dilate(const SpectralField& f, int lambda) {
  const GridSpec& g = f.grid();
  if (lambda < 1 || (lambda & (lambda - 1)) != 0)
    throw std::invalid_argument("dilate: lambda must be a dyadic integer >= 1");
  if (lambda == 1) return f;
  const int m = g.pts, band = m / (2 * lambda);
  const CVec& c = f.frequency();
  double peak = 0;
  for (Eigen::Index i = 0; i < c.size(); ++i) peak = std::max(peak, std::abs(c[i]));
  auto in_band = [&](int k) { return std::abs(g.signed_index(k)) < band; };
  auto check = [&](int k, Complex v) {
    if (!in_band(k) && std::abs(v) > 1e-10 * peak)
      throw std::domain_error("dilate: field is not band-limited to m/(2 lambda)");
  };
  CVec out = CVec::Zero(g.size());
  const double scale = std::pow(static_cast<double>(lambda), -0.5 * g.dim);
  auto target = [&](int k) {  // DFT index of lambda * s(k)
    int t = lambda * g.signed_index(k);
    return t < 0 ? t + m : t;
  };
  if (g.dim == 1) {
    for (int k = 0; k < m; ++k) {
      check(k, c[k]);
      if (in_band(k)) out[target(k)] = scale * c[k];
    }
  } else {
    for (int kx = 0; kx < m; ++kx)
      for (int ky = 0; ky < m; ++ky) {
        const Complex v = c[static_cast<std::size_t>(kx) * m + ky];
        check(kx, v);
        check(ky, v);
        if (in_band(kx) && in_band(ky))
          out[static_cast<std::size_t>(target(kx)) * m + target(ky)] = scale * v;
      }
  }
  return SpectralField::from_frequency(g, std::move(out));
}

void write_field(const std::string& path, const SpectralField& f, const std::string& representation) {
  static_assert(__BYTE_ORDER__ == __ORDER_LITTLE_ENDIAN__, "dump format is little-endian");
  if (representation != "physical" && representation != "frequency")
    throw std::invalid_argument("write_field: representation must be physical or frequency");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_field: cannot open " + path);
  std::ostringstream hdr;
  hdr.precision(17);
  hdr << "{\"n\":" << f.grid().dim << ",\"m\":" << f.grid().pts
      << ",\"L\":" << f.grid().half_width << ",\"representation\":\"" << representation << "\"}\n";
  os << hdr.str();
  const CVec& v = representation == "physical" ? f.physical() : f.frequency();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = v[i].real(), im = v[i].imag();
    os.write(reinterpret_cast<const char*>(&re), sizeof(double));
    os.write(reinterpret_cast<const char*>(&im), sizeof(double));
  }
  if (!os) throw std::runtime_error("write_field: write failed for " + path);
}

SpectralField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_field: cannot open " + path);
  std::string header;
  std::getline(is, header);
  auto grab = [&](const std::string& key) -> std::string {
    auto pos = header.find("\"" + key + "\":");
    if (pos == std::string::npos) throw std::runtime_error("read_field: bad header in " + path);
    pos += key.size() + 3;
    auto end = header.find_first_of(",}", pos);
    return header.substr(pos, end - pos);
  };
  const int n = std::stoi(grab("n"));
  const int m = std::stoi(grab("m"));
  const double L = std::stod(grab("L"));
  std::string repr = grab("representation");
  repr.erase(std::remove(repr.begin(), repr.end(), '"'), repr.end());
  GridSpec g = make_grid(n, m, L);
  CVec v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double re, im;
    is.read(reinterpret_cast<char*>(&re), sizeof(double));
    is.read(reinterpret_cast<char*>(&im), sizeof(double));
    v[i] = Complex(re, im);
  }
  if (!is) throw std::runtime_error("read_field: truncated payload in " + path);
  return repr == "physical" ? SpectralField::from_physical(g, std::move(v))
                            : SpectralField::from_frequency(g, std::move(v));
}

}  // namespace inls
