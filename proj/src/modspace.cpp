#include "inls/modspace.hpp"

#include <cmath>
#include <stdexcept>

#include "inls/evolution.hpp"
#include "inls/exponents.hpp"
#include "inls/parallel.hpp"

namespace inls {

namespace {

// Smoothstep S: [-1,1] -> [0,1], S(x) = int_{-1}^x e^{-1/(1-t^2)} dt, normalized.
// Tabulated once by composite Simpson; linear interpolation is far below the
// 1e-12 partition-of-unity budget because sigma is renormalized anyway.
class Smoothstep {
public:
  Smoothstep() {
    const int n = kTable - 1;
    const double w = 2.0 / n;
    std::vector<double> f(kTable);
    for (int i = 0; i < kTable; ++i) f[i] = bump(-1.0 + w * i);
    table_[0] = 0;
    for (int i = 1; i <= n; ++i) {
      const double mid = bump(-1.0 + w * (i - 0.5));
      table_[i] = table_[i - 1] + (f[i - 1] + 4.0 * mid + f[i]) * w / 6.0;
    }
    const double total = table_[n];
    for (int i = 0; i <= n; ++i) table_[i] /= total;
  }

  double operator()(double x) const {
    if (x <= -1) return 0;
    if (x >= 1) return 1;
    const double pos = (x + 1.0) * 0.5 * (kTable - 1);
    const int i = std::min(static_cast<int>(pos), kTable - 2);
    const double frac = pos - i;
    return table_[i] * (1 - frac) + table_[i + 1] * frac;
  }

private:
  static double bump(double t) {
    const double d = 1.0 - t * t;
    return d > 0 ? std::exp(-1.0 / d) : 0.0;
  }
  static constexpr int kTable = 8193;
  std::array<double, kTable> table_{};
};

const Smoothstep& smoothstep() {
  static const Smoothstep s;
  return s;
}

// 1D bump profile: 1 on |t| <= 1/2, 0 on |t| >= 1, smooth monotone between.
double rho_profile(double t) {
  const double a = std::abs(t);
  if (a <= 0.5) return 1.0;
  if (a >= 1.0) return 0.0;
  return smoothstep()(3.0 - 4.0 * a);
}

double holder_weight(double s, double kx, double ky) {
  if (s == 0.0) return 1.0;
  return std::pow(1.0 + std::sqrt(kx * kx + ky * ky), s);
}

}  // namespace

WindowFamily::WindowFamily(const GridSpec& g, int blocks_per_axis) : grid_(g), blocks_(blocks_per_axis) {
  const int m = g.pts;
  if (blocks_ < 2 || blocks_ > m || (m % blocks_) != 0 || (blocks_ & (blocks_ - 1)) != 0)
    throw std::invalid_argument("WindowFamily: blocks per axis must be a power of two dividing m");
  stride_ = m / blocks_;

  // Per-axis windows: lattice coordinate u_j = s(j)/stride, centers at the
  // integers {-B/2, ..., B/2 - 1}; normalization over the active set makes
  // the family an exact partition of unity on the resolved band.
  axis_sigma_.assign(static_cast<std::size_t>(blocks_) * m, 0.0);
  std::vector<double> total(m, 0.0);
  for (int kc = 0; kc < blocks_; ++kc) {
    const int center = kc - blocks_ / 2;
    for (int j = 0; j < m; ++j) {
      const double u = static_cast<double>(g.signed_index(j)) / stride_;
      axis_sigma_[static_cast<std::size_t>(kc) * m + j] = rho_profile(u - center);
    }
  }
  for (int j = 0; j < m; ++j) {
    for (int kc = 0; kc < blocks_; ++kc) total[j] += axis_sigma_[static_cast<std::size_t>(kc) * m + j];
    for (int kc = 0; kc < blocks_; ++kc) axis_sigma_[static_cast<std::size_t>(kc) * m + j] /= total[j];
  }

  if (g.dim == 1) {
    for (int k = -blocks_ / 2; k < blocks_ / 2; ++k) active_.push_back({k, 0});
  } else {
    for (int kx = -blocks_ / 2; kx < blocks_ / 2; ++kx)
      for (int ky = -blocks_ / 2; ky < blocks_ / 2; ++ky) active_.push_back({kx, ky});
  }
}

WindowFamily WindowFamily::with_defaults(const GridSpec& g) {
  const int cap = g.dim == 1 ? 64 : 16;
  return WindowFamily(g, std::min(g.pts, cap));
}

bool WindowFamily::contains(std::array<int, 2> k) const {
  const int lo = -blocks_ / 2, hi = blocks_ / 2 - 1;
  if (k[0] < lo || k[0] > hi) return false;
  if (grid_.dim == 2) return k[1] >= lo && k[1] <= hi;
  return k[1] == 0;
}

double WindowFamily::sigma_axis(int k, int j) const {
  return axis_sigma_[static_cast<std::size_t>(k + blocks_ / 2) * grid_.pts + j];
}

RVec WindowFamily::sigma(std::array<int, 2> k) const {
  RVec out(grid_.size());
  const int m = grid_.pts;
  if (grid_.dim == 1) {
    for (int j = 0; j < m; ++j) out[j] = sigma_axis(k[0], j);
  } else {
    for (int jx = 0; jx < m; ++jx) {
      const double wx = sigma_axis(k[0], jx);
      for (int jy = 0; jy < m; ++jy)
        out[static_cast<std::size_t>(jx) * m + jy] = wx * sigma_axis(k[1], jy);
    }
  }
  return out;
}

SpectralField block(const SpectralField& f, std::array<int, 2> k, const WindowFamily& w) {
  if (!(f.grid() == w.grid())) throw std::invalid_argument("block: grid mismatch");
  if (!w.contains(k)) throw std::domain_error("block: lattice index outside the active set");
  CVec c = f.frequency();
  const RVec s = w.sigma(k);
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] *= s[i];
  return SpectralField::from_frequency(f.grid(), std::move(c));
}

RVec block_lp_norms(const SpectralField& f, double p, const WindowFamily& w) {
  const auto& K = w.active_set();
  RVec norms(K.size());
  parallel_for(K.size(), [&](std::size_t i) { norms[i] = lp_norm(block(f, K[i], w), p); });
  return norms;
}

double mod_norm_from_blocks(const RVec& block_norms, const ModulationParams& params,
                            const WindowFamily& w) {
  const auto& K = w.active_set();
  if (block_norms.size() != static_cast<Eigen::Index>(K.size()))
    throw std::invalid_argument("mod_norm_from_blocks: size mismatch");
  if (std::isinf(params.q)) {
    double mx = 0;
    for (std::size_t i = 0; i < K.size(); ++i)
      mx = std::max(mx, holder_weight(params.s, K[i][0], K[i][1]) * block_norms[i]);
    return mx;
  }
  double acc = 0;
  for (std::size_t i = 0; i < K.size(); ++i)
    acc += std::pow(holder_weight(params.s, K[i][0], K[i][1]) * block_norms[i], params.q);
  return std::pow(acc, 1.0 / params.q);
}

double mod_norm(const SpectralField& f, const ModulationParams& params, const WindowFamily& w) {
  if (!(params.p >= 1) || !(params.q >= 1))
    throw std::invalid_argument("mod_norm: exponents must be >= 1");
  return mod_norm_from_blocks(block_lp_norms(f, params.p, w), params, w);
}

SpectralField gaussian_window(const GridSpec& g) {
  CVec v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double x0, x1;
    g.coords(i, x0, x1);
    double val = 0;  // periodize over neighboring boxes; e^{-pi x^2} tails die fast
    for (int wx = -1; wx <= 1; ++wx)
      for (int wy = (g.dim == 2 ? -1 : 0); wy <= (g.dim == 2 ? 1 : 0); ++wy) {
        const double px = x0 + wx * 2.0 * g.half_width, py = x1 + wy * 2.0 * g.half_width;
        val += std::exp(-M_PI * (px * px + py * py));
      }
    v[i] = val;
  }
  SpectralField raw = SpectralField::from_physical(g, std::move(v));
  const double nrm = lp_norm(raw, 2);
  return SpectralField::from_physical(g, raw.physical() / nrm);
}

double stft_norm(const SpectralField& f, const ModulationParams& params,
                 const SpectralField& window, const WindowFamily& w) {
  const GridSpec& g = f.grid();
  if (!(g == window.grid())) throw std::invalid_argument("stft_norm: window grid mismatch");
  const double wnorm = lp_norm(window, 2);
  if (!(wnorm > 0)) throw std::invalid_argument("stft_norm: zero window");
  const CVec gwin = window.physical() / wnorm;
  const CVec& fv = f.physical();

  const std::size_t n = g.size();
  const int m = g.pts;
  const double hn = std::pow(g.mesh(), g.dim);
  const bool pinf = std::isinf(params.p);

  // Accumulate ||V(. , omega)||_{L^p_x}^p per frequency. Shifts run in fixed
  // order; a bounded batch is transformed in parallel, then folded serially so
  // the reduction order never depends on the thread count.
  RVec acc = RVec::Zero(n);
  const std::size_t batch = 64;
  std::vector<CVec> slots(std::min(batch, n));
  for (std::size_t base = 0; base < n; base += batch) {
    const std::size_t cnt = std::min(batch, n - base);
    parallel_for(cnt, [&](std::size_t t) {
      const std::size_t shift = base + t;
      CVec prod(n);
      if (g.dim == 1) {
        for (std::size_t j = 0; j < n; ++j)
          prod[j] = fv[j] * std::conj(gwin[(j + n - shift) % n]);
      } else {
        const std::size_t sx = shift / m, sy = shift % m;
        for (int jx = 0; jx < m; ++jx)
          for (int jy = 0; jy < m; ++jy) {
            const std::size_t src = static_cast<std::size_t>((jx + m - sx) % m) * m + (jy + m - sy) % m;
            prod[static_cast<std::size_t>(jx) * m + jy] = fv[static_cast<std::size_t>(jx) * m + jy] * std::conj(gwin[src]);
          }
      }
      slots[t] = forward_transform(g, prod);
    });
    for (std::size_t t = 0; t < cnt; ++t)
      for (std::size_t l = 0; l < n; ++l) {
        const double mag = std::abs(slots[t][l]);
        if (pinf)
          acc[l] = std::max(acc[l], mag);
        else
          acc[l] += std::pow(mag, params.p) * hn;
      }
  }

  // Mixed outer norm over omega with measure (2L)^{-n} and the lattice weight.
  const double measure = std::pow(2.0 * g.half_width, -g.dim);
  auto weight = [&](std::size_t l) {
    if (params.s == 0.0) return 1.0;
    double ux, uy = 0;
    if (g.dim == 1) {
      ux = static_cast<double>(g.signed_index(static_cast<int>(l))) / w.stride();
    } else {
      ux = static_cast<double>(g.signed_index(static_cast<int>(l) / m)) / w.stride();
      uy = static_cast<double>(g.signed_index(static_cast<int>(l) % m)) / w.stride();
    }
    return std::pow(1.0 + ux * ux + uy * uy, 0.5 * params.s);
  };
  if (std::isinf(params.q)) {
    double mx = 0;
    for (std::size_t l = 0; l < n; ++l) {
      const double xp = pinf ? acc[l] : std::pow(acc[l], 1.0 / params.p);
      mx = std::max(mx, weight(l) * xp);
    }
    return mx;
  }
  double out = 0;
  for (std::size_t l = 0; l < n; ++l) {
    const double xp = pinf ? acc[l] : std::pow(acc[l], 1.0 / params.p);
    out += std::pow(weight(l) * xp, params.q) * measure;
  }
  return std::pow(out, 1.0 / params.q);
}

double propagator_bound_probe(const SpectralField& f, double t, const ModulationParams& params,
                              const WindowFamily& w, PropagatorBoundForm form) {
  if (form == PropagatorBoundForm::Decay && !(params.p >= 2))
    throw std::invalid_argument("propagator_bound_probe: decay form needs p >= 2");
  const double num = mod_norm(propagate(f, t), params, w);
  const int n = f.grid().dim;
  const double pinv = std::isinf(params.p) ? 0.0 : 1.0 / params.p;
  if (form == PropagatorBoundForm::Decay) {
    ModulationParams dual = params;
    dual.p = conjugate_exponent(params.p);
    const double env = std::pow(1.0 + t * t, -0.5 * n * (0.5 - pinv));
    return num / (env * mod_norm(f, dual, w));
  }
  const double env = std::pow(1.0 + t * t, 0.5 * n * std::abs(0.5 - pinv));
  return num / (env * mod_norm(f, params, w));
}

}  // namespace inls
