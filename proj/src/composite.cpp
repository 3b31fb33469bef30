#include <moyalspin/composite.hpp>

#include "fft.hpp"
#include "grid_detail.hpp"
#include "parallel.hpp"

#include <cmath>
#include <numbers>

namespace moyalspin {

using detail::parallel_for;

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

cplx root_of_unity(long num, long den) {
  long r = num % den;
  if (r < 0) r += den;
  return std::polar(1.0, 2.0 * kPi * static_cast<double>(r) / static_cast<double>(den));
}

void require_d1(const GridSpec& g, const char* what) {
  if (g.d != 1) fail(ErrorCode::InvalidArgument, std::string(what) + " supports d = 1 only");
}

// Operator kernel of the (a, b) spin block for either kind of state.
detail::PairKernel block_kernel(const HybridState& state, int a, int b) {
  if (state.is_pure()) {
    const auto row = state.pure_field().component(a);
    const auto col = state.pure_field().component(b);
    return [row, col](std::size_t minus, std::size_t plus) {
      return row[minus] * std::conj(col[plus]);
    };
  }
  const HybridOperator* rho = &state.density();
  return [rho, a, b](std::size_t minus, std::size_t plus) { return rho->at(a, b, minus, plus); };
}

// C_ab for all spin blocks, stored at index a * dim + b.
std::vector<PhaseFunction> cross_wigner_blocks(const HybridState& state) {
  const int D = state.dim();
  std::vector<PhaseFunction> C(static_cast<std::size_t>(D * D));
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b)
      C[a * D + b] = detail::wigner_from_pairs(state.grid(), block_kernel(state, a, b));
  return C;
}

std::vector<cplx> quantizer_sum(const std::vector<PhaseFunction>& C, const DiscreteKernel& K,
                                std::size_t table) {
  const int D = K.dim();
  const QuantizerTable omega(K);
  std::vector<cplx> out(static_cast<std::size_t>(D * D) * table, 0.0);
  parallel_for(static_cast<std::size_t>(D * D), [&](std::size_t mn) {
    const int m = static_cast<int>(mn) / D;
    const int n = static_cast<int>(mn) % D;
    cplx* dst = out.data() + mn * table;
    for (int a = 0; a < D; ++a) {
      for (int b = 0; b < D; ++b) {
        const cplx w = omega(m, n)(b, a) / static_cast<double>(D);
        const auto& src = C[a * D + b].values;
        for (std::size_t i = 0; i < table; ++i) dst[i] += w * src[i];
      }
    }
  });
  return out;
}

}  // namespace

HybridOperator::HybridOperator(GridSpec g, int spin_dim) : grid(g), dim(spin_dim) {
  grid.validate();
  require_d1(grid, "HybridOperator");
  if (spin_dim < 1) fail(ErrorCode::InvalidArgument, "spin dimension must be >= 1");
  const std::size_t N = grid.points();
  values.assign(static_cast<std::size_t>(dim) * dim * N * N, 0.0);
}

HybridOperator HybridOperator::identity(GridSpec g, int spin_dim) {
  HybridOperator op(g, spin_dim);
  const double diag = 1.0 / op.grid.dq();
  for (int a = 0; a < spin_dim; ++a)
    for (std::size_t x = 0; x < op.grid.points(); ++x) op.at(a, a, x, x) = diag;
  return op;
}

cplx HybridOperator::trace() const {
  cplx s = 0.0;
  for (int a = 0; a < dim; ++a)
    for (std::size_t x = 0; x < grid.points(); ++x) s += at(a, a, x, x);
  return s * grid.dq();
}

double HybridOperator::hermiticity_defect() const {
  double worst = 0.0;
  const std::size_t N = grid.points();
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (std::size_t x = 0; x < N; ++x)
        for (std::size_t y = 0; y < N; ++y)
          worst = std::max(worst, std::abs(at(a, b, x, y) - std::conj(at(b, a, y, x))));
  return worst;
}

HybridState HybridState::pure(SpinorField psi) {
  psi.grid.validate();
  if (psi.amplitudes.size() != static_cast<std::size_t>(psi.dim) * psi.grid.points())
    fail(ErrorCode::GridMismatch, "spinor field size does not match its grid");
  if (std::abs(psi.norm2() - 1.0) > kStateTolerance)
    fail(ErrorCode::InvalidState, "pure state is not normalized");
  HybridState s;
  s.pure_ = std::move(psi);
  return s;
}

HybridState HybridState::mixed(HybridOperator rho) {
  rho.grid.validate();
  require_d1(rho.grid, "mixed states");
  if (rho.hermiticity_defect() * rho.grid.dq() > kStateTolerance)
    fail(ErrorCode::InvalidState, "mixed state is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > kStateTolerance)
    fail(ErrorCode::InvalidState, "mixed state does not have unit trace");
  HybridState s;
  s.mixed_ = std::move(rho);
  return s;
}

HybridState HybridState::mixture(const std::vector<SpinorField>& states,
                                 const std::vector<double>& weights) {
  if (states.empty() || states.size() != weights.size())
    fail(ErrorCode::InvalidArgument, "mixture needs one weight per state");
  HybridOperator rho(states.front().grid, states.front().dim);
  const std::size_t N = rho.grid.points();
  for (std::size_t i = 0; i < states.size(); ++i) {
    const SpinorField& psi = states[i];
    if (!(psi.grid == rho.grid)) fail(ErrorCode::GridMismatch, "mixture: grids differ");
    if (psi.dim != rho.dim) fail(ErrorCode::DimensionMismatch, "mixture: spin dimensions differ");
    if (weights[i] < 0.0) fail(ErrorCode::InvalidState, "mixture weights must be nonnegative");
    for (int a = 0; a < rho.dim; ++a)
      for (int b = 0; b < rho.dim; ++b)
        for (std::size_t x = 0; x < N; ++x)
          for (std::size_t y = 0; y < N; ++y)
            rho.at(a, b, x, y) +=
                weights[i] * psi.component(a)[x] * std::conj(psi.component(b)[y]);
  }
  return mixed(std::move(rho));
}

const SpinorField& HybridState::pure_field() const {
  if (!pure_) fail(ErrorCode::InvalidArgument, "state is not pure");
  return *pure_;
}

const HybridOperator& HybridState::density() const {
  if (!mixed_) fail(ErrorCode::InvalidArgument, "state is not given as a density table");
  return *mixed_;
}

const GridSpec& HybridState::grid() const noexcept {
  return pure_ ? pure_->grid : mixed_->grid;
}

int HybridState::dim() const noexcept { return pure_ ? pure_->dim : mixed_->dim; }

WignerField full_wigner(const HybridState& state, const DiscreteKernel& K, WignerRoute route) {
  const int D = state.dim();
  if (K.dim() != D) fail(ErrorCode::DimensionMismatch, "full_wigner: kernel dimension differs");
  if (route == WignerRoute::automatic)
    route = K.variant() == KernelVariant::cosine ? WignerRoute::closed_form
                                                 : WignerRoute::quantizer;
  if (route == WignerRoute::closed_form && K.variant() != KernelVariant::cosine)
    fail(ErrorCode::InvalidArgument, "closed-form Wigner route needs a cosine kernel");

  const auto C = cross_wigner_blocks(state);
  WignerField W(state.grid(), D);
  const std::size_t table = C.front().values.size();

  if (route == WignerRoute::quantizer) {
    const auto sum = quantizer_sum(C, K, table);
    for (std::size_t i = 0; i < sum.size(); ++i) W.values[i] = sum[i].real();
    return W;
  }

  const double eps = K.epsilon();
  const double scale = 1.0 / (D * std::cos(eps));
  parallel_for(static_cast<std::size_t>(D * D), [&](std::size_t mn) {
    const int m = static_cast<int>(mn) / D;
    const int n = static_cast<int>(mn) % D;
    // exp(i(eps - n phi_m)) sum_n' exp(i n' phi_m) C_{n n'}
    const cplx outer = std::polar(1.0, eps) * root_of_unity(-long{n} * m, D);
    std::vector<cplx> acc(table, 0.0);
    for (int np = 0; np < D; ++np) {
      const cplx w = outer * root_of_unity(long{np} * m, D);
      const auto& src = C[n * D + np].values;
      for (std::size_t i = 0; i < table; ++i) acc[i] += w * src[i];
    }
    double* dst = W.values.data() + mn * table;
    for (std::size_t i = 0; i < table; ++i) dst[i] = scale * acc[i].real();
  });
  return W;
}

double full_wigner_imag_residue(const HybridState& state, const DiscreteKernel& K) {
  if (K.dim() != state.dim())
    fail(ErrorCode::DimensionMismatch, "full_wigner: kernel dimension differs");
  const auto C = cross_wigner_blocks(state);
  const auto sum = quantizer_sum(C, K, C.front().values.size());
  double worst = 0.0;
  for (const cplx& v : sum) worst = std::max(worst, std::abs(v.imag()));
  return worst;
}

Marginals marginals(const WignerField& W) {
  const std::size_t P = W.grid.points();
  const int D = W.dim;
  const double dp = W.grid.cell_p(), dq = W.grid.cell_q();
  Marginals out;
  out.position.assign(P, 0.0);
  out.momentum.assign(P, 0.0);
  out.number.assign(D, 0.0);
  out.phase.assign(D, 0.0);
  for (int m = 0; m < D; ++m) {
    for (int n = 0; n < D; ++n) {
      double block = 0.0;
      for (std::size_t p = 0; p < P; ++p) {
        for (std::size_t q = 0; q < P; ++q) {
          const double v = W.at(m, n, p, q);
          out.position[q] += v * dp;
          out.momentum[p] += v * dq;
          block += v;
        }
      }
      block *= dp * dq;
      out.number[n] += block;
      out.phase[m] += block;
    }
  }
  return out;
}

HybridSymbol ordered_symbol(const HybridOperator& op, Ordering ordering) {
  op.grid.validate();
  require_d1(op.grid, "ordered_symbol");
  const int D = op.dim;
  const std::size_t N = op.grid.points();
  const long Nl = static_cast<long>(N);
  if (op.values.size() != static_cast<std::size_t>(D * D) * N * N)
    fail(ErrorCode::GridMismatch, "ordered_symbol: operator table does not match grid");
  const double dq = op.grid.dq();

  // F[(a * D + b) * N + q][p]: the plane-wave sum over x' for fixed q.
  std::vector<std::vector<cplx>> F(static_cast<std::size_t>(D * D) * N);
  parallel_for(F.size(), [&](std::size_t idx) {
    const int a = static_cast<int>(idx / N) / D;
    const int b = static_cast<int>(idx / N) % D;
    const std::size_t q = idx % N;
    std::vector<cplx> line(N);
    int sign;
    if (ordering == Ordering::standard) {
      for (std::size_t x = 0; x < N; ++x) line[x] = op.at(a, b, q, x);
      sign = +1;
    } else {
      for (std::size_t x = 0; x < N; ++x) line[x] = op.at(a, b, x, q);
      sign = -1;
    }
    auto out = detail::centered_dft(line, op.grid, sign);
    const long qc = static_cast<long>(q) - Nl / 2;
    for (std::size_t p = 0; p < N; ++p) {
      const long pc = static_cast<long>(p) - Nl / 2;
      out[p] *= dq * root_of_unity(-sign * pc * qc, Nl);
    }
    F[idx] = std::move(out);
  });

  HybridSymbol sym{op.grid, D, std::vector<cplx>(static_cast<std::size_t>(D * D) * N * N)};
  for (int m = 0; m < D; ++m) {
    for (int n = 0; n < D; ++n) {
      cplx* dst = sym.values.data() + (static_cast<std::size_t>(m) * D + n) * N * N;
      for (int np = 0; np < D; ++np) {
        // standard: Op(n, n') exp(i(n' - n) phi_m); antistandard: Op(n', n) exp(i(n - n') phi_m)
        const bool std_order = ordering == Ordering::standard;
        const cplx w = root_of_unity(std_order ? long{np - n} * m : long{n - np} * m, D);
        const std::size_t block = std_order ? static_cast<std::size_t>(n * D + np)
                                            : static_cast<std::size_t>(np * D + n);
        for (std::size_t q = 0; q < N; ++q) {
          const auto& line = F[block * N + q];
          for (std::size_t p = 0; p < N; ++p) dst[p * N + q] += w * line[p];
        }
      }
    }
  }
  return sym;
}

WignerField kernel_change(const WignerField& W, const DiscreteKernel& K,
                          const DiscreteKernel& K_new) {
  const int D = W.dim;
  if (K.dim() != D || K_new.dim() != D)
    fail(ErrorCode::DimensionMismatch, "kernel_change: kernel dimensions differ");
  // W_new(m,n) = sum_{m',n'} T(m,n,m',n') W(m',n') with
  // T = D^-2 sum_kl exp(-2 pi i (km+ln)/D) K_new/K exp(2 pi i (km'+ln')/D).
  const int D2 = D * D;
  std::vector<cplx> T(static_cast<std::size_t>(D2 * D2), 0.0);
  for (int m = 0; m < D; ++m)
    for (int n = 0; n < D; ++n)
      for (int mp = 0; mp < D; ++mp)
        for (int np = 0; np < D; ++np) {
          cplx acc = 0.0;
          for (int k = 0; k < D; ++k)
            for (int l = 0; l < D; ++l) {
              const cplx ratio = K_new(k, l) / K(k, l);
              acc += ratio * root_of_unity(long{k} * (mp - m) + long{l} * (np - n), D);
            }
          T[(m * D + n) * D2 + mp * D + np] = acc / static_cast<double>(D2);
        }
  WignerField out(W.grid, D);
  const std::size_t table = ipow(W.grid.points(), 2);
  parallel_for(static_cast<std::size_t>(D2), [&](std::size_t row) {
    double* dst = out.values.data() + row * table;
    for (std::size_t col = 0; col < static_cast<std::size_t>(D2); ++col) {
      // W is real, so only Re T reaches Re W_new.
      const double w = T[row * D2 + col].real();
      if (w == 0.0) continue;
      const double* src = W.values.data() + col * table;
      for (std::size_t i = 0; i < table; ++i) dst[i] += w * src[i];
    }
  });
  return out;
}

std::size_t HybridTilde::lambda_points() const { return ipow(grid.n_points / 2, grid.d); }
std::size_t HybridTilde::mu_points() const { return grid.points(); }

std::size_t HybridTilde::lambda_origin() const {
  const std::size_t M = grid.n_points / 2;
  std::size_t flat = 0;
  for (int a = 0; a < grid.d; ++a) flat = flat * M + M / 2;
  return flat;
}

std::size_t HybridTilde::mu_origin() const {
  const std::size_t N = grid.n_points;
  std::size_t flat = 0;
  for (int a = 0; a < grid.d; ++a) flat = flat * N + N / 2;
  return flat;
}

namespace {

// Centred per-axis offsets (jj - M/2) of a flat lambda index.
std::array<int, 3> lambda_offset(const GridSpec& g, std::size_t jj) {
  const int M = g.n_points / 2;
  std::array<int, 3> j{0, 0, 0};
  for (int a = g.d - 1; a >= 0; --a) {
    j[a] = static_cast<int>(jj % M) - M / 2;
    jj /= M;
  }
  return j;
}

}  // namespace

HybridTilde tilde_rho(const HybridState& state) {
  const GridSpec& g = state.grid();
  const int D = state.dim();
  HybridTilde t{g, D, {}};
  const std::size_t J = t.lambda_points(), R = t.mu_points(), P = g.points();
  t.values.assign(J * R * D * D, 0.0);
  const double pref = std::pow(g.hbar / (2.0 * kPi), g.d) / D * g.cell_q();

  std::vector<detail::PairKernel> kernels;
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b) kernels.push_back(block_kernel(state, a, b));

  parallel_for(J, [&](std::size_t jj) {
    const auto j = lambda_offset(g, jj);
    // pairs[(a * D + b) * P + q] = rho_ab(q - j dq, q + j dq)
    std::vector<cplx> pairs(static_cast<std::size_t>(D * D) * P);
    for (int ab = 0; ab < D * D; ++ab)
      for (std::size_t q = 0; q < P; ++q)
        pairs[ab * P + q] = detail::symmetrized_pair(g, g.unflatten(q), j, kernels[ab]);
    std::vector<cplx> line(P);
    for (int k = 0; k < D; ++k) {
      for (int l = 0; l < D; ++l) {
        std::fill(line.begin(), line.end(), cplx(0.0));
        for (int n = 0; n < D; ++n) {
          const cplx w = root_of_unity(-long{l} * n, D);
          const std::size_t ab = static_cast<std::size_t>(n * D + (n + k) % D);
          for (std::size_t q = 0; q < P; ++q) line[q] += w * pairs[ab * P + q];
        }
        const auto spec = detail::centered_dft(line, g, -1);
        const cplx phase = pref * root_of_unity(-long{k} * l, 2L * D);
        for (std::size_t rr = 0; rr < R; ++rr) t.at(jj, rr, k, l) = phase * spec[rr];
      }
    }
  });
  return t;
}

WignerField wigner_from_tilde(const HybridTilde& t, const DiscreteKernel& K) {
  const GridSpec& g = t.grid;
  g.validate();
  const int D = t.dim;
  if (K.dim() != D) fail(ErrorCode::DimensionMismatch, "wigner_from_tilde: kernel dimension");
  const std::size_t J = t.lambda_points(), R = t.mu_points(), P = g.points();
  if (t.values.size() != J * R * D * D)
    fail(ErrorCode::GridMismatch, "wigner_from_tilde: table does not match grid");
  const int N = g.n_points;
  const int M = N / 2;
  const double dlambda = 2.0 * g.dq() / g.hbar;
  const double dmu = 2.0 * kPi / g.length;
  const double pref = std::pow(dlambda * dmu / (2.0 * kPi * g.hbar), g.d) / D;

  // Slot (j mod M) of each centred lambda index and the momentum site of
  // each output slot.
  std::vector<std::size_t> slot(J), p_site(J);
  for (std::size_t jj = 0; jj < J; ++jj) {
    const auto j = lambda_offset(g, jj);
    std::size_t s = 0, p = 0;
    for (int a = 0; a < g.d; ++a) {
      s = s * M + static_cast<std::size_t>((j[a] + M) % M);
      p = p * N + static_cast<std::size_t>(j[a] + N / 2);
    }
    slot[jj] = s;
    // Slot s holds central momentum index j, so output slot s maps to p.
    p_site[s] = p;
  }

  // X[(k * D + l)][p * P + q] = sum_{j,r} exp(i lambda.p + i mu.q) t(j, r, k, l)
  const detail::FftPlan plan(std::vector<int>(g.d, M), +1);
  std::vector<std::vector<cplx>> X(static_cast<std::size_t>(D * D),
                                   std::vector<cplx>(P * P, 0.0));
  parallel_for(static_cast<std::size_t>(D * D), [&](std::size_t kl) {
    const int k = static_cast<int>(kl) / D, l = static_cast<int>(kl) % D;
    std::vector<cplx> over_q(J * P);
    std::vector<cplx> line(R);
    for (std::size_t jj = 0; jj < J; ++jj) {
      for (std::size_t rr = 0; rr < R; ++rr) line[rr] = t.at(jj, rr, k, l);
      const auto back = detail::centered_dft(line, g, +1);
      for (std::size_t q = 0; q < P; ++q) over_q[jj * P + q] = back[q];
    }
    std::vector<cplx> a(J), w(J);
    for (std::size_t q = 0; q < P; ++q) {
      for (std::size_t jj = 0; jj < J; ++jj) a[slot[jj]] = over_q[jj * P + q];
      plan.execute(a.data(), w.data());
      for (std::size_t s = 0; s < J; ++s) X[kl][p_site[s] * P + q] = w[s];
    }
  });

  WignerField W(g, D);
  const std::size_t table = P * P;
  parallel_for(static_cast<std::size_t>(D * D), [&](std::size_t mn) {
    const int m = static_cast<int>(mn) / D, n = static_cast<int>(mn) % D;
    std::vector<cplx> acc(table, 0.0);
    for (int k = 0; k < D; ++k) {
      for (int l = 0; l < D; ++l) {
        const cplx w = std::conj(K(k, l)) * root_of_unity(long{k} * m + long{l} * n, D);
        const auto& src = X[k * D + l];
        for (std::size_t i = 0; i < table; ++i) acc[i] += w * src[i];
      }
    }
    double* dst = W.values.data() + mn * table;
    for (std::size_t i = 0; i < table; ++i) dst[i] = pref * acc[i].real();
  });
  return W;
}

}  // namespace moyalspin
