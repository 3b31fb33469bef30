#ifndef MOYALSPIN_GRID_HPP
#define MOYALSPIN_GRID_HPP

// Continuous factor on a periodic lattice. Positions per axis are
// q_k = (k - N/2) dq with dq = L/N; momenta are p_j = (j - N/2) dp with
// dp = 2 pi hbar/L, k, j = 0..N-1. Multi-axis points are flattened
// row-major with axis 0 slowest. Phase-space tables are indexed
// [p_flat][q_flat].

#include <moyalspin/spin_core.hpp>

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace moyalspin {

struct GridSpec {
  int d = 1;
  int n_points = 128;
  double length = 20.0;
  double hbar = 1.0;

  static constexpr std::size_t kMaxPoints = 4096;

  // Throws InvalidArgument unless 1 <= d <= 3, N >= 4 is a power of two,
  // N^d <= kMaxPoints, L > 0 and hbar > 0.
  void validate() const;

  double dq() const noexcept { return length / n_points; }
  double dp() const noexcept;
  std::size_t points() const noexcept;  // N^d
  double position(int k) const noexcept { return (k - n_points / 2) * dq(); }
  double momentum(int j) const noexcept { return (j - n_points / 2) * dp(); }
  double cell_q() const noexcept;  // dq^d
  double cell_p() const noexcept;  // dp^d

  // Per-axis lattice indices of a flattened point.
  std::array<int, 3> unflatten(std::size_t flat) const noexcept;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// psi_n(q) stored as amplitudes[n * points + q_flat].
struct SpinorField {
  GridSpec grid;
  int dim = 1;
  std::vector<cplx> amplitudes;

  SpinorField() = default;
  SpinorField(GridSpec g, int spin_dim);

  std::span<cplx> component(int n);
  std::span<const cplx> component(int n) const;
  double norm2() const;  // sum_n sum_q |psi_n(q)|^2 dq^d
  void normalize();
};

struct PhaseFunction {
  GridSpec grid;
  std::vector<cplx> values;  // [p_flat * points + q_flat]

  PhaseFunction() = default;
  explicit PhaseFunction(GridSpec g);

  cplx& at(std::size_t p, std::size_t q) { return values[p * grid.points() + q]; }
  cplx at(std::size_t p, std::size_t q) const { return values[p * grid.points() + q]; }
  // sum over the lattice times dp^d dq^d
  cplx integral() const;
};

// Samples f(p, q) on the lattice; the spans have d entries.
PhaseFunction sample_phase_function(
    const GridSpec& grid,
    const std::function<cplx(std::span<const double> p, std::span<const double> q)>& f);

// rho_W(p, q, phi_m, n), stored as values[((m * dim + n) * P + p) * P + q]
// with P = grid.points().
struct WignerField {
  GridSpec grid;
  int dim = 1;
  std::vector<double> values;

  WignerField() = default;
  WignerField(GridSpec g, int spin_dim);

  double& at(int m, int n, std::size_t p, std::size_t q) {
    return values[index(m, n, p, q)];
  }
  double at(int m, int n, std::size_t p, std::size_t q) const {
    return values[index(m, n, p, q)];
  }
  // sum over all indices times dp^d dq^d
  double total() const;

 private:
  std::size_t index(int m, int n, std::size_t p, std::size_t q) const {
    const std::size_t P = grid.points();
    return ((static_cast<std::size_t>(m) * dim + n) * P + p) * P + q;
  }
};

// Cross-Wigner transform of the continuous factor,
//   (2 pi hbar)^-d int dxi exp(i xi.p/hbar) conj(col(q + xi/2)) row(q - xi/2).
// xi runs over even multiples of dq with |xi_i| < L/2 so that q +- xi/2
// stay on the lattice. The resolvable momenta are then the central half
// |j - N/2| < N/4 of each momentum axis; the outer half is zero. The
// position marginal is exact; the momentum marginal is exact for states
// localized well inside the box and band-limited to the central half.
PhaseFunction wigner_continuous(std::span<const cplx> row, std::span<const cplx> col,
                                const GridSpec& grid);

enum class DerivativeScheme {
  spectral,           // Fourier differentiation; periodic band-limited symbols
  finite_difference,  // 9-point stencils; exact on polynomials of degree <= 8
};

// Selects the non-truncated product, evaluated as a sum over Fourier mode
// pairs. Cost grows as (N^{2d})^2, so it is limited to N^{2d} <= 4096.
inline constexpr int kMoyalExact = -1;

// f exp(i hbar/2 (<-d_q ->d_p - <-d_p ->d_q)) g, truncated after hbar^order.
PhaseFunction moyal_star(const PhaseFunction& f, const PhaseFunction& g, int order = 2,
                         DerivativeScheme scheme = DerivativeScheme::spectral);

// Poisson bracket {f, g} = d_q f d_p g - d_p f d_q g.
PhaseFunction poisson_bracket(const PhaseFunction& f, const PhaseFunction& g,
                              DerivativeScheme scheme = DerivativeScheme::spectral);

// Partial derivative of order (n_p, n_q) along one momentum/position axis.
PhaseFunction phase_derivative(const PhaseFunction& f, int axis, int n_p, int n_q,
                               DerivativeScheme scheme = DerivativeScheme::spectral);

// rho(p, q - p t/m0) by Fourier interpolation along the position axes.
PhaseFunction free_evolution(const PhaseFunction& rho, double t, double m0);

// Fraction of sum |psi|^2 carried by lattice sites within 5% of the box
// edge along any axis. Large values mean the periodic box is too small.
double boundary_mass(const SpinorField& psi);
double boundary_mass(std::span<const cplx> field, const GridSpec& grid);

// Oscillator eigenfunction with quantum number n along axis 0 and the
// ground state along the other axes, for mass m0 and frequency omega.
std::vector<cplx> oscillator_state(const GridSpec& grid, int n, double m0 = 1.0,
                                   double omega = 1.0);

// psi~(p_j) = (2 pi hbar)^{-d/2} sum_q exp(-i p.q/hbar) psi(q) dq^d on the
// full momentum lattice.
std::vector<cplx> momentum_amplitudes(std::span<const cplx> field, const GridSpec& grid);

}  // namespace moyalspin

#endif
