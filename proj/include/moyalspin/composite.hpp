#ifndef MOYALSPIN_COMPOSITE_HPP
#define MOYALSPIN_COMPOSITE_HPP

// Position lattice times spin: full Wigner functions, marginals, operator
// orderings, kernel change and the dual (lambda, mu, k, l) representation.

#include <moyalspin/grid.hpp>
#include <moyalspin/spin_core.hpp>

#include <optional>
#include <vector>

namespace moyalspin {

// Operator kernel <x, a|A|x', b> on a d = 1 lattice with continuum
// normalization: the identity is delta_ab delta_xx' / dq and the trace is
// sum_a sum_x A(a, a, x, x) dq.
struct HybridOperator {
  GridSpec grid;
  int dim = 1;
  std::vector<cplx> values;  // [((a * dim + b) * N + x) * N + x']

  HybridOperator() = default;
  HybridOperator(GridSpec g, int spin_dim);
  static HybridOperator identity(GridSpec g, int spin_dim);

  cplx& at(int a, int b, std::size_t x, std::size_t xp) { return values[index(a, b, x, xp)]; }
  cplx at(int a, int b, std::size_t x, std::size_t xp) const {
    return values[index(a, b, x, xp)];
  }
  cplx trace() const;
  double hermiticity_defect() const;  // max |A - A^dagger|

 private:
  std::size_t index(int a, int b, std::size_t x, std::size_t xp) const {
    const std::size_t N = grid.points();
    return ((static_cast<std::size_t>(a) * dim + b) * N + x) * N + xp;
  }
};

class HybridState {
 public:
  static HybridState pure(SpinorField psi);
  // Requires d = 1, Hermitian and unit trace to kStateTolerance.
  static HybridState mixed(HybridOperator rho);
  // Convex mixture of pure states; weights must be nonnegative and sum to 1.
  static HybridState mixture(const std::vector<SpinorField>& states,
                             const std::vector<double>& weights);

  bool is_pure() const noexcept { return pure_.has_value(); }
  const SpinorField& pure_field() const;
  const HybridOperator& density() const;
  const GridSpec& grid() const noexcept;
  int dim() const noexcept;

 private:
  std::optional<SpinorField> pure_;
  std::optional<HybridOperator> mixed_;
};

enum class WignerRoute {
  automatic,    // closed form for cosine kernels, quantizer sum otherwise
  quantizer,    // (s+1)^-1 Re sum_ab omega(m,n)_ba C_ab
  closed_form,  // cosine kernels only
};

// rho_W(p, q, phi_m, n). C_ab is the cross-Wigner transform of the
// (a, b) spin block.
WignerField full_wigner(const HybridState& state, const DiscreteKernel& K,
                        WignerRoute route = WignerRoute::automatic);

// Largest imaginary part of the quantizer sum before the real part is taken.
double full_wigner_imag_residue(const HybridState& state, const DiscreteKernel& K);

struct Marginals {
  std::vector<double> position;  // per position site, integrated over p
  std::vector<double> momentum;  // per momentum site, integrated over q
  std::vector<double> number;    // per n, summed over m
  std::vector<double> phase;     // per phi_m, summed over n
};

Marginals marginals(const WignerField& W);

enum class Ordering { standard, antistandard };

// Complex table over (p, q, phi_m, n); d = 1.
struct HybridSymbol {
  GridSpec grid;
  int dim = 1;
  std::vector<cplx> values;  // [((m * dim + n) * N + p) * N + q]

  cplx at(int m, int n, std::size_t p, std::size_t q) const {
    const std::size_t N = grid.points();
    return values[((static_cast<std::size_t>(m) * dim + n) * N + p) * N + q];
  }
};

// standard:      (2 pi hbar)(s+1) <p,phi_m|q,n><q,n|A|p,phi_m>
// antistandard:  (2 pi hbar)(s+1) <q,n|p,phi_m><p,phi_m|A|q,n>
HybridSymbol ordered_symbol(const HybridOperator& op, Ordering ordering);

// Re-expresses W for kernel K as the Wigner function for K_new. Only the
// discrete factor is reweighted; the continuous kernel stays 1.
WignerField kernel_change(const WignerField& W, const DiscreteKernel& K,
                          const DiscreteKernel& K_new);

// Dual-lattice representation. Per axis, lambda = 2 j dq/hbar with
// j = jj - N/4, jj in [0, N/2), and mu = 2 pi r/L with r = rr - N/2,
// rr in [0, N).
struct HybridTilde {
  GridSpec grid;
  int dim = 1;
  std::vector<cplx> values;  // [((jj_flat * R + rr_flat) * dim + k) * dim + l]

  std::size_t lambda_points() const;  // (N/2)^d
  std::size_t mu_points() const;      // N^d
  cplx at(std::size_t jj, std::size_t rr, int k, int l) const {
    return values[((jj * mu_points() + rr) * dim + k) * dim + l];
  }
  cplx& at(std::size_t jj, std::size_t rr, int k, int l) {
    return values[((jj * mu_points() + rr) * dim + k) * dim + l];
  }
  // Flat indices of lambda = 0 and mu = 0.
  std::size_t lambda_origin() const;
  std::size_t mu_origin() const;
};

// (hbar/2 pi)^d (s+1)^-1 Tr{rho U^dagger(lambda, mu) D^dagger(k, l)}.
HybridTilde tilde_rho(const HybridState& state);

// Inverse of tilde_rho weighted by conj K(k,l), evaluated on the resolvable
// momentum band used by full_wigner.
WignerField wigner_from_tilde(const HybridTilde& t, const DiscreteKernel& K);

}  // namespace moyalspin

#endif
