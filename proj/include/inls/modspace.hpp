#pragma once

#include <array>
#include <vector>

#include "inls/grid.hpp"

namespace inls {

/// Lebesgue/summation exponents and weight regularity for M^{p,q}_s.
struct ModulationParams {
  double p = 2;
  double q = 2;
  double s = 0;
};

/// Smooth partition of unity sigma_k on the grid's frequency lattice.
///
/// The integer lattice sits on the frequency axis with one lattice unit per
/// `stride` grid frequencies (lattice coordinate u = xi L/(pi stride)), so a
/// family with B blocks per axis has stride m/B and each window's plateau
/// spans stride/2 grid frequencies either side of its center. The active set
/// covers the whole resolved band, and sigma_k = rho_k / sum_l rho_l with rho
/// built from e^{-1/(1-t^2)} smoothstep integration, tensorized over axes.
class WindowFamily {
public:
  WindowFamily(const GridSpec& g, int blocks_per_axis);

  /// min(m, 64) blocks in 1D, min(m, 16) in 2D.
  static WindowFamily with_defaults(const GridSpec& g);

  const GridSpec& grid() const { return grid_; }
  int blocks_per_axis() const { return blocks_; }
  int stride() const { return stride_; }

  /// Active lattice indices, row-major; second component 0 when dim == 1.
  const std::vector<std::array<int, 2>>& active_set() const { return active_; }
  bool contains(std::array<int, 2> k) const;

  /// sigma_k at every grid frequency (flattened DFT order).
  RVec sigma(std::array<int, 2> k) const;
  /// 1D window value for axis lattice index k at DFT index j.
  double sigma_axis(int k, int j) const;

private:
  GridSpec grid_;
  int blocks_ = 0, stride_ = 0;
  std::vector<std::array<int, 2>> active_;
  std::vector<double> axis_sigma_;  // blocks_ x pts, row-major
};

/// Frequency-uniform block: frequency content of f times sigma_k.
/// Rejects k outside the active set.
SpectralField block(const SpectralField& f, std::array<int, 2> k, const WindowFamily& w);

/// ||block_k f||_{L^p} for every active k, in active-set order.
/// Blocks are computed in parallel; the output order is fixed.
RVec block_lp_norms(const SpectralField& f, double p, const WindowFamily& w);

/// || (1+|k|)^s ||block_k f||_{L^p} ||_{l^q_k}.
double mod_norm(const SpectralField& f, const ModulationParams& params, const WindowFamily& w);

/// Same norm assembled from precomputed block norms.
double mod_norm_from_blocks(const RVec& block_norms, const ModulationParams& params,
                            const WindowFamily& w);

/// Periodized Gaussian e^{-pi |x|^2}, L^2-normalized: the default STFT window.
SpectralField gaussian_window(const GridSpec& g);

/// Short-time Fourier transform mixed norm
///   || ||V_g f(x, omega)||_{L^p_x} (1+|omega|^2)^{s/2} ||_{L^q_omega}
/// with omega in the family's lattice units. Rejects a zero window;
/// any nonzero window is L^2-normalized internally.
double stft_norm(const SpectralField& f, const ModulationParams& params,
                 const SpectralField& window, const WindowFamily& w);

}  // namespace inls
