#include <moyalspin/spin_core.hpp>

#include <cmath>
#include <sstream>

namespace moyalspin {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionParity: return "DimensionParity";
    case ErrorCode::KernelZero: return "KernelZero";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ResonantDenominator: return "ResonantDenominator";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
  }
  return "Unknown";
}

namespace {

long positive_mod(long a, long b) {
  long r = a % b;
  return r < 0 ? r + b : r;
}

// exp(2 pi i num/den), with num reduced first so large products stay exact.
cplx root_of_unity(long num, long den) {
  const long r = positive_mod(num, den);
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) /
                       static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension " << a << " does not match " << b;
    fail(ErrorCode::DimensionMismatch, os.str());
  }
}

}  // namespace

SpinDim::SpinDim(int s) : s_(s) {
  if (s < 0) fail(ErrorCode::InvalidArgument, "spin dimension requires s >= 0");
}

SpinOperator::SpinOperator(CMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1)
    fail(ErrorCode::InvalidArgument, "spin operator must be a non-empty square matrix");
}

SpinOperator SpinOperator::identity(int dim) {
  return SpinOperator(CMatrix::Identity(dim, dim));
}

SpinOperator SpinOperator::zero(int dim) {
  return SpinOperator(CMatrix::Zero(dim, dim));
}

bool SpinOperator::is_unitary(double tol) const {
  const CMatrix err = m_.adjoint() * m_ - CMatrix::Identity(dim(), dim());
  return err.cwiseAbs().maxCoeff() <= tol;
}

bool SpinOperator::is_hermitian(double tol) const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

SpinOperator operator*(const SpinOperator& a, const SpinOperator& b) {
  require_same_dim(a.dim(), b.dim(), "operator product");
  return SpinOperator(a.m_ * b.m_);
}

SpinOperator operator+(const SpinOperator& a, const SpinOperator& b) {
  require_same_dim(a.dim(), b.dim(), "operator sum");
  return SpinOperator(a.m_ + b.m_);
}

SpinOperator operator-(const SpinOperator& a, const SpinOperator& b) {
  require_same_dim(a.dim(), b.dim(), "operator difference");
  return SpinOperator(a.m_ - b.m_);
}

SpinOperator operator*(cplx z, const SpinOperator& a) {
  return SpinOperator(z * a.m_);
}

double max_abs_diff(const SpinOperator& a, const SpinOperator& b) {
  require_same_dim(a.dim(), b.dim(), "max_abs_diff");
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

SpinOperator pauli(int i) {
  using namespace std::complex_literals;
  CMatrix m(2, 2);
  switch (i) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -1i, 1i, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: fail(ErrorCode::InvalidArgument, "pauli index must be 0..3");
  }
  return SpinOperator(m);
}

CMatrix phase_basis(SpinDim s) {
  const int D = s.dim();
  const double norm = 1.0 / std::sqrt(static_cast<double>(D));
  CMatrix P(D, D);
  for (int n = 0; n < D; ++n)
    for (int m = 0; m < D; ++m) P(n, m) = norm * root_of_unity(long{n} * m, D);
  return P;
}

SchwingerPair schwinger_ops(SpinDim s) {
  const int D = s.dim();
  CMatrix V = CMatrix::Zero(D, D);
  for (int n = 0; n < D; ++n) V(n, n) = root_of_unity(n, D);

  // R = sum_m exp(i phi_m) |phi_m><phi_m|
  const CMatrix P = phase_basis(s);
  CMatrix R = CMatrix::Zero(D, D);
  for (int m = 0; m < D; ++m)
    R += root_of_unity(m, D) * P.col(m) * P.col(m).adjoint();
  return {SpinOperator(std::move(V)), SpinOperator(std::move(R))};
}

SpinOperator disp_D(SpinDim s, long k, long l) {
  const long D = s.dim();
  // R^k V^l |j> = exp(2 pi i j l/D) |j - k mod D>
  const cplx phase = root_of_unity(-k * l, 2 * D);
  CMatrix out = CMatrix::Zero(D, D);
  for (long j = 0; j < D; ++j)
    out(positive_mod(j - k, D), j) = phase * root_of_unity(j * l, D);
  return SpinOperator(std::move(out));
}

const char* to_string(KernelVariant v) noexcept {
  switch (v) {
    case KernelVariant::parity_odd: return "parity_odd";
    case KernelVariant::parity_even_half_odd: return "parity_even_half_odd";
    case KernelVariant::cosine: return "cosine";
    case KernelVariant::custom: return "custom";
  }
  return "unknown";
}

DiscreteKernel::DiscreteKernel(SpinDim s, KernelVariant v, double eps, CMatrix values)
    : s_(s), variant_(v), epsilon_(eps), values_(std::move(values)) {}

double DiscreteKernel::default_epsilon(SpinDim s) {
  const int D = s.dim();
  if (D % 2 == 1) return 0.0;
  // pi/4 hits a zero of the cosine at kl = D/4 when 4 divides D.
  return D % 4 == 0 ? std::numbers::pi / (2.0 * D) : std::numbers::pi / 4.0;
}

DiscreteKernel DiscreteKernel::make_default(SpinDim s) {
  return make(s, KernelVariant::cosine, default_epsilon(s));
}

DiscreteKernel DiscreteKernel::make(SpinDim s, KernelVariant variant, double epsilon) {
  const int D = s.dim();
  CMatrix K(D, D);
  switch (variant) {
    case KernelVariant::parity_odd:
      if (D % 2 == 0)
        fail(ErrorCode::DimensionParity,
             "parity_odd kernel requires odd s+1, got " + std::to_string(D));
      for (int k = 0; k < D; ++k)
        for (int l = 0; l < D; ++l) K(k, l) = (k * l) % 2 == 0 ? 1.0 : -1.0;
      epsilon = 0.0;
      break;
    case KernelVariant::parity_even_half_odd:
      if (D % 2 != 0 || (D / 2) % 2 == 0)
        fail(ErrorCode::DimensionParity,
             "parity_even_half_odd kernel requires even s+1 with odd (s+1)/2, got " +
                 std::to_string(D));
      for (int k = 0; k < D; ++k)
        for (int l = 0; l < D; ++l) K(k, l) = (k * l) % 4 == 0 ? 1.0 : -1.0;
      epsilon = 0.0;
      break;
    case KernelVariant::cosine: {
      const double c0 = std::cos(epsilon);
      if (std::abs(c0) < 1e-12)
        fail(ErrorCode::KernelZero, "cosine kernel vanishes at (k,l)=(0,0): cos(epsilon) = 0");
      for (int k = 0; k < D; ++k) {
        for (int l = 0; l < D; ++l) {
          const double c =
              std::cos(std::numbers::pi * static_cast<double>(k * l) / D + epsilon);
          if (std::abs(c) < 1e-12) {
            std::ostringstream os;
            os << "cosine kernel vanishes at (k,l)=(" << k << "," << l
               << ") for epsilon=" << epsilon;
            fail(ErrorCode::KernelZero, os.str());
          }
          K(k, l) = c / c0;
        }
      }
      // The k = 0 and l = 0 lines are exactly one.
      K.row(0).setOnes();
      K.col(0).setOnes();
      break;
    }
    case KernelVariant::custom:
      fail(ErrorCode::InvalidArgument, "use DiscreteKernel::from_table for custom kernels");
  }
  validate(s, K);
  return DiscreteKernel(s, variant, epsilon, std::move(K));
}

DiscreteKernel DiscreteKernel::from_table(SpinDim s, CMatrix table) {
  validate(s, table);
  return DiscreteKernel(s, KernelVariant::custom, 0.0, std::move(table));
}

void DiscreteKernel::validate(SpinDim s, const CMatrix& K) {
  const int D = s.dim();
  if (K.rows() != D || K.cols() != D)
    fail(ErrorCode::DimensionMismatch, "kernel table must be (s+1)x(s+1)");
  constexpr double tol = 1e-12;
  for (int k = 0; k < D; ++k) {
    for (int l = 0; l < D; ++l) {
      const cplx v = K(k, l);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) < tol) {
        std::ostringstream os;
        os << "kernel value vanishes or is not finite at (k,l)=(" << k << "," << l << ")";
        fail(ErrorCode::KernelZero, os.str());
      }
      if ((k == 0 || l == 0) && std::abs(v - 1.0) > tol) {
        std::ostringstream os;
        os << "kernel must equal 1 where kl = 0, violated at (k,l)=(" << k << "," << l << ")";
        fail(ErrorCode::InvalidArgument, os.str());
      }
      if (k >= 1 && l >= 1) {
        const double sign = (D - k - l) % 2 == 0 ? 1.0 : -1.0;
        const cplx mirror = K(D - k, D - l);
        if (std::abs(std::conj(v) - sign * mirror) > tol * (1.0 + std::abs(v))) {
          std::ostringstream os;
          os << "kernel violates the Hermiticity reflection rule at (k,l)=(" << k << "," << l
             << ")";
          fail(ErrorCode::InvalidArgument, os.str());
        }
      }
    }
  }
}

bool DiscreteKernel::is_unimodular(double tol) const {
  return (values_.cwiseAbs().array() - 1.0).abs().maxCoeff() <= tol;
}

SpinOperator spin_quantizer(const DiscreteKernel& K, int m, int n) {
  const int D = K.dim();
  if (m < 0 || m >= D || n < 0 || n >= D)
    fail(ErrorCode::InvalidArgument, "quantizer grid point out of range");
  CMatrix omega = CMatrix::Zero(D, D);
  for (int k = 0; k < D; ++k)
    for (int l = 0; l < D; ++l)
      omega += K(k, l) * root_of_unity(-(long{k} * m + long{l} * n), D) *
               disp_D(K.spin(), k, l).matrix();
  return SpinOperator(omega / static_cast<double>(D));
}

QuantizerTable::QuantizerTable(const DiscreteKernel& K) : dim_(K.dim()) {
  ops_.reserve(static_cast<std::size_t>(dim_ * dim_));
  for (int m = 0; m < dim_; ++m)
    for (int n = 0; n < dim_; ++n) ops_.push_back(spin_quantizer(K, m, n));
}

QuantizerTable spin_quantizer(const DiscreteKernel& K) { return QuantizerTable(K); }

void validate_density(const SpinOperator& rho) {
  if (!rho.is_hermitian(kStateTolerance))
    fail(ErrorCode::InvalidState, "density operator is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > kStateTolerance)
    fail(ErrorCode::InvalidState, "density operator does not have unit trace");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kStateTolerance)
    fail(ErrorCode::InvalidState, "density operator is not positive semidefinite");
}

DiscreteSymbol spin_wigner(const SpinOperator& rho, const DiscreteKernel& K) {
  require_same_dim(rho.dim(), K.dim(), "spin_wigner");
  validate_density(rho);
  const int D = K.dim();
  const QuantizerTable omega(K);
  CMatrix W(D, D);
  for (int m = 0; m < D; ++m)
    for (int n = 0; n < D; ++n)
      W(m, n) = (rho.matrix() * omega(m, n).matrix()).trace() / static_cast<double>(D);
  return {std::move(W)};
}

CMatrix grid_dft(const CMatrix& f) {
  const int D = static_cast<int>(f.rows());
  CMatrix out = CMatrix::Zero(D, D);
  for (int k = 0; k < D; ++k)
    for (int l = 0; l < D; ++l)
      for (int m = 0; m < D; ++m)
        for (int n = 0; n < D; ++n)
          out(k, l) += root_of_unity(-(long{k} * m + long{l} * n), D) * f(m, n);
  return out;
}

CMatrix grid_idft(const CMatrix& t) {
  const int D = static_cast<int>(t.rows());
  CMatrix out = CMatrix::Zero(D, D);
  for (int m = 0; m < D; ++m)
    for (int n = 0; n < D; ++n)
      for (int k = 0; k < D; ++k)
        for (int l = 0; l < D; ++l)
          out(m, n) += root_of_unity(long{k} * m + long{l} * n, D) * t(k, l);
  return out / static_cast<double>(D * D);
}

TildeSymbol tilde(const SpinOperator& op) {
  const int D = op.dim();
  const SpinDim s = SpinDim::from_dim(D);
  CMatrix t(D, D);
  for (int k = 0; k < D; ++k)
    for (int l = 0; l < D; ++l)
      t(k, l) = (op.matrix() * disp_D(s, k, l).matrix().adjoint()).trace() /
                static_cast<double>(D);
  return {std::move(t)};
}

SpinOperator from_tilde(const TildeSymbol& t) {
  const int D = t.dim();
  const SpinDim s = SpinDim::from_dim(D);
  CMatrix op = CMatrix::Zero(D, D);
  for (int k = 0; k < D; ++k)
    for (int l = 0; l < D; ++l) op += t(k, l) * disp_D(s, k, l).matrix();
  return SpinOperator(std::move(op));
}

namespace {

// Discrete Heaviside step: 1 for j >= 0.
int step(int j) { return j >= 0 ? 1 : 0; }

}  // namespace

TildeSymbol boxtimes_discrete(const TildeSymbol& f, const TildeSymbol& g) {
  require_same_dim(f.dim(), g.dim(), "boxtimes_discrete");
  const int D = f.dim();
  CMatrix out = CMatrix::Zero(D, D);
  for (int k = 0; k < D; ++k) {
    for (int l = 0; l < D; ++l) {
      cplx acc = 0.0;
      for (int kp = 0; kp < D; ++kp) {
        for (int lp = 0; lp < D; ++lp) {
          const int kpp = static_cast<int>(positive_mod(k - kp, D));
          const int lpp = static_cast<int>(positive_mod(l - lp, D));
          const int exponent = (kp - k) * step(lp - l - 1) + (lp - l) * step(kp - k - 1) +
                               D * step(kp - k - 1) * step(lp - l - 1);
          const double sign = positive_mod(exponent, 2) == 0 ? 1.0 : -1.0;
          acc += sign * root_of_unity(long{kp} * l - long{k} * lp, 2L * D) * f(kp, lp) *
                 g(kpp, lpp);
        }
      }
      out(k, l) = acc;
    }
  }
  return {std::move(out)};
}

DiscreteSymbol spin_symbol(const SpinOperator& op, const DiscreteKernel& K) {
  require_same_dim(op.dim(), K.dim(), "spin_symbol");
  const int D = K.dim();
  const CMatrix weighted = tilde(op).values.cwiseQuotient(K.table());
  return {grid_idft(weighted) * static_cast<double>(D * D)};
}

SpinOperator spin_dequantize(const DiscreteSymbol& f, const DiscreteKernel& K) {
  require_same_dim(f.dim(), K.dim(), "spin_dequantize");
  const int D = K.dim();
  CMatrix t = grid_dft(f.values).cwiseProduct(K.table()) / static_cast<double>(D * D);
  return from_tilde(TildeSymbol{std::move(t)});
}

DiscreteSymbol spin_star(const DiscreteSymbol& f, const DiscreteSymbol& g,
                         const DiscreteKernel& K) {
  require_same_dim(f.dim(), g.dim(), "spin_star");
  return spin_symbol(spin_dequantize(f, K) * spin_dequantize(g, K), K);
}

DiscreteSymbol spin_star_bracket(const DiscreteSymbol& f, const DiscreteSymbol& g,
                                 const DiscreteKernel& K) {
  return {spin_star(f, g, K).values - spin_star(g, f, K).values};
}

DiscreteSymbol qubit_star_explicit(const DiscreteSymbol& f, const DiscreteSymbol& g) {
  using namespace std::complex_literals;
  if (f.dim() != 2 || g.dim() != 2)
    fail(ErrorCode::DimensionMismatch, "qubit_star_explicit needs spin-1/2 symbols");
  auto sg = [](int e) { return e % 2 == 0 ? 1.0 : -1.0; };
  CMatrix out = CMatrix::Zero(2, 2);
  for (int m = 0; m < 2; ++m) {
    for (int n = 0; n < 2; ++n) {
      cplx acc = 0.0;
      for (int m1 = 0; m1 < 2; ++m1)
        for (int n1 = 0; n1 < 2; ++n1)
          for (int m2 = 0; m2 < 2; ++m2)
            for (int n2 = 0; n2 < 2; ++n2) {
              const double re = (1 + sg(m1 + m2)) * (1 + sg(n1 + n2)) +
                                sg(m) * (sg(m1) + sg(m2)) +
                                sg(m + n) * (sg(m1 + n1) + sg(m2 + n2)) +
                                sg(n) * (sg(n1) + sg(n2));
              const double im = sg(m) * sg(n1 + n2) * (sg(m1) - sg(m2)) +
                                sg(m + n) * (sg(m2 + n1) - sg(m1 + n2)) +
                                sg(n) * sg(m1 + m2) * (sg(n2) - sg(n1));
              acc += f(m1, n1) * g(m2, n2) * (re + 1i * im);
            }
      out(m, n) = acc / 16.0;
    }
  }
  return {std::move(out)};
}

}  // namespace moyalspin
