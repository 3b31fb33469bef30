#ifndef MOYALSPIN_SPIN_CORE_HPP
#define MOYALSPIN_SPIN_CORE_HPP

// Finite-dimensional phase space of a spin s/2: the (s+1)x(s+1) grid of
// points (phi_m, n). Everything here is exact dense linear algebra on
// C^(s+1); index conventions:
//   |n>       number basis, n = 0..s
//   |phi_m>   phase basis, phi_m = 2 pi m/(s+1)
//   (m, n)    phase-space grid point, DiscreteSymbol(m, n)
//   (k, l)    dual (Fourier) index, TildeSymbol(k, l), D(k, l)

#include <moyalspin/error.hpp>

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <vector>

namespace moyalspin {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

// Twice the spin. The Hilbert space has dimension s+1.
class SpinDim {
 public:
  explicit SpinDim(int s);
  static SpinDim from_dim(int dim) { return SpinDim(dim - 1); }

  int s() const noexcept { return s_; }
  int dim() const noexcept { return s_ + 1; }

  friend bool operator==(SpinDim, SpinDim) = default;

 private:
  int s_;
};

class SpinOperator {
 public:
  explicit SpinOperator(CMatrix m);
  static SpinOperator identity(int dim);
  static SpinOperator zero(int dim);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const noexcept { return m_; }
  cplx operator()(int row, int col) const { return m_(row, col); }

  cplx trace() const { return m_.trace(); }
  SpinOperator adjoint() const { return SpinOperator(m_.adjoint()); }
  bool is_unitary(double tol) const;
  bool is_hermitian(double tol) const;

  friend SpinOperator operator*(const SpinOperator& a, const SpinOperator& b);
  friend SpinOperator operator+(const SpinOperator& a, const SpinOperator& b);
  friend SpinOperator operator-(const SpinOperator& a, const SpinOperator& b);
  friend SpinOperator operator*(cplx z, const SpinOperator& a);

 private:
  CMatrix m_;
};

// Largest entrywise modulus of a - b.
double max_abs_diff(const SpinOperator& a, const SpinOperator& b);

// Pauli matrices in the basis sigma_3|0> = |0>.
SpinOperator pauli(int i);

// Table over the spin grid, values(m, n).
struct DiscreteSymbol {
  CMatrix values;
  int dim() const noexcept { return static_cast<int>(values.rows()); }
  cplx operator()(int m, int n) const { return values(m, n); }
};

// Table over the dual grid, values(k, l).
struct TildeSymbol {
  CMatrix values;
  int dim() const noexcept { return static_cast<int>(values.rows()); }
  cplx operator()(int k, int l) const { return values(k, l); }
};

// Columns are |phi_m>, entries exp(2 pi i n m/(s+1))/sqrt(s+1).
CMatrix phase_basis(SpinDim s);

struct SchwingerPair {
  SpinOperator V;  // clock, diag(exp(2 pi i n/(s+1)))
  SpinOperator R;  // shift, R|n> = |n-1 mod (s+1)>
};
SchwingerPair schwinger_ops(SpinDim s);

// D(k,l) = exp(-i pi k l/(s+1)) R^k V^l. The phase uses the integers as
// given, so D(k + s + 1, l) differs from D(k, l) by (-1)^l.
SpinOperator disp_D(SpinDim s, long k, long l);

enum class KernelVariant {
  parity_odd,            // (-1)^{kl}, s+1 odd
  parity_even_half_odd,  // -1 unless kl = 0 mod 4; s+1 even, (s+1)/2 odd
  cosine,                // cos(pi k l/(s+1) + eps)/cos(eps)
  custom,
};

const char* to_string(KernelVariant v) noexcept;

// Ordering kernel K(k, l) over the dual grid. Construction validates:
// K = 1 on the k = 0 and l = 0 lines, no zero entries, and the reflection
// rule conj K(k,l) = (-1)^{s+1-k-l} K(s+1-k, s+1-l) for 1 <= k,l <= s,
// which makes every quantizer Hermitian.
class DiscreteKernel {
 public:
  static DiscreteKernel make(SpinDim s, KernelVariant variant, double epsilon);
  // Cosine kernel with the default epsilon.
  static DiscreteKernel make_default(SpinDim s);
  static DiscreteKernel from_table(SpinDim s, CMatrix table);

  // 0 for odd s+1, pi/4 for s+1 = 2 mod 4, pi/(2(s+1)) for s+1 = 0 mod 4.
  static double default_epsilon(SpinDim s);

  SpinDim spin() const noexcept { return s_; }
  int dim() const noexcept { return s_.dim(); }
  KernelVariant variant() const noexcept { return variant_; }
  double epsilon() const noexcept { return epsilon_; }
  cplx operator()(int k, int l) const { return values_(k, l); }
  const CMatrix& table() const noexcept { return values_; }

  // |K(k,l)| = 1 everywhere, the condition for trace-orthogonal quantizers.
  bool is_unimodular(double tol = 1e-12) const;

 private:
  DiscreteKernel(SpinDim s, KernelVariant v, double eps, CMatrix values);
  static void validate(SpinDim s, const CMatrix& values);

  SpinDim s_;
  KernelVariant variant_;
  double epsilon_;
  CMatrix values_;
};

// Stratonovich-Weyl quantizers omega(m, n) for every grid point.
class QuantizerTable {
 public:
  explicit QuantizerTable(const DiscreteKernel& K);
  int dim() const noexcept { return dim_; }
  const SpinOperator& operator()(int m, int n) const {
    return ops_[static_cast<std::size_t>(m * dim_ + n)];
  }

 private:
  int dim_;
  std::vector<SpinOperator> ops_;
};

// omega(m,n) = (s+1)^-1 sum_{k,l} K(k,l) exp(-2 pi i (km+ln)/(s+1)) D(k,l)
SpinOperator spin_quantizer(const DiscreteKernel& K, int m, int n);
QuantizerTable spin_quantizer(const DiscreteKernel& K);

inline constexpr double kStateTolerance = 1e-10;

// Throws InvalidState unless rho is Hermitian, unit trace and positive
// semidefinite to kStateTolerance.
void validate_density(const SpinOperator& rho);

// (s+1)^-1 Tr{rho omega(m,n)}.
DiscreteSymbol spin_wigner(const SpinOperator& rho, const DiscreteKernel& K);

DiscreteSymbol spin_symbol(const SpinOperator& op, const DiscreteKernel& K);
SpinOperator spin_dequantize(const DiscreteSymbol& f, const DiscreteKernel& K);

// t(k,l) = (s+1)^-1 Tr{op D^dagger(k,l)} and its inverse op = sum t D.
TildeSymbol tilde(const SpinOperator& op);
SpinOperator from_tilde(const TildeSymbol& t);

// Twisted convolution on the dual grid; the tilde image of the operator
// product.
TildeSymbol boxtimes_discrete(const TildeSymbol& f, const TildeSymbol& g);

DiscreteSymbol spin_star(const DiscreteSymbol& f, const DiscreteSymbol& g,
                         const DiscreteKernel& K);
DiscreteSymbol spin_star_bracket(const DiscreteSymbol& f,
                                 const DiscreteSymbol& g,
                                 const DiscreteKernel& K);

// Closed-form spin-1/2 star product for the kernel (-1)^{kl}; grid
// functions are independent of (p, q). Used as a second route to
// spin_star at s = 1.
DiscreteSymbol qubit_star_explicit(const DiscreteSymbol& f,
                                   const DiscreteSymbol& g);

// Plain discrete Fourier pair over the spin grid:
//   forward(k,l) = sum_{m,n} exp(-2 pi i (km+ln)/D) f(m,n)
//   inverse(m,n) = D^-2 sum_{k,l} exp(+2 pi i (km+ln)/D) t(k,l)
CMatrix grid_dft(const CMatrix& f);
CMatrix grid_idft(const CMatrix& t);

}  // namespace moyalspin

#endif
