#include <moyalspin/grid.hpp>

#include "fft.hpp"
#include "grid_detail.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace moyalspin {

using detail::FftPlan;
using detail::parallel_for;

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// FFT index to signed wavenumber index.
int signed_mode(int j, int N) { return j < N / 2 ? j : j - N; }

void require_grid(const PhaseFunction& a, const PhaseFunction& b, const char* what) {
  if (!(a.grid == b.grid)) fail(ErrorCode::GridMismatch, std::string(what) + ": grids differ");
  if (a.values.size() != ipow(a.grid.points(), 2) || b.values.size() != a.values.size())
    fail(ErrorCode::GridMismatch, std::string(what) + ": table size does not match grid");
}

std::vector<int> axes_dims(int count, int N) { return std::vector<int>(count, N); }

// Angular wavenumbers of the 2d phase-space axes (p axes first).
std::vector<std::vector<double>> phase_wavenumbers(const GridSpec& g) {
  const int N = g.n_points;
  std::vector<std::vector<double>> k(2 * g.d, std::vector<double>(N));
  const double period_p = N * g.dp();
  for (int a = 0; a < 2 * g.d; ++a) {
    const double period = a < g.d ? period_p : g.length;
    for (int j = 0; j < N; ++j) k[a][j] = 2.0 * kPi * signed_mode(j, N) / period;
  }
  return k;
}

// Per-axis indices of a flat row-major index over `axes` axes of size N.
void split_index(std::size_t flat, int axes, int N, int* out) {
  for (int a = axes - 1; a >= 0; --a) {
    out[a] = static_cast<int>(flat % N);
    flat /= N;
  }
}

// Fornberg finite-difference weights for derivatives 0..m at z from nodes x.
std::vector<std::vector<double>> fornberg(double z, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

constexpr int kStencil = 9;

// Differentiates along one axis of a row-major N^axes array with a 9-point
// stencil, one-sided near the edges.
std::vector<cplx> fd_axis(const std::vector<cplx>& v, int axes, int N, int axis, int order,
                          double h) {
  if (order == 0) return v;
  const int width = std::min(kStencil, N);
  if (order >= width)
    fail(ErrorCode::InvalidArgument, "finite-difference derivative order exceeds stencil");
  std::vector<int> start(N);
  std::vector<std::vector<double>> w(N);
  for (int i = 0; i < N; ++i) {
    start[i] = std::clamp(i - width / 2, 0, N - width);
    std::vector<double> nodes(width);
    for (int s = 0; s < width; ++s) nodes[s] = (start[i] + s - i) * h;
    w[i] = fornberg(0.0, nodes, order)[order];
  }
  const std::size_t stride = ipow(N, axes - 1 - axis);
  std::vector<cplx> out(v.size());
  for (std::size_t flat = 0; flat < v.size(); ++flat) {
    const int i = static_cast<int>((flat / stride) % N);
    const std::size_t base = flat - static_cast<std::size_t>(i) * stride;
    cplx acc = 0.0;
    for (int s = 0; s < width; ++s) acc += w[i][s] * v[base + (start[i] + s) * stride];
    out[flat] = acc;
  }
  return out;
}

// Derivative evaluator for a fixed phase function, reusing its spectrum.
class Differentiator {
 public:
  Differentiator(const PhaseFunction& f, DerivativeScheme scheme)
      : f_(f), scheme_(scheme), axes_(2 * f.grid.d), N_(f.grid.n_points) {
    if (scheme_ == DerivativeScheme::spectral) {
      k_ = phase_wavenumbers(f.grid);
      spectrum_.resize(f.values.size());
      FftPlan(axes_dims(axes_, N_), -1).execute(f.values.data(), spectrum_.data());
    }
  }

  // orders[a] for a in 0..2d-1, p axes first.
  std::vector<cplx> operator()(const std::vector<int>& orders) const {
    if (std::all_of(orders.begin(), orders.end(), [](int o) { return o == 0; }))
      return f_.values;
    if (scheme_ == DerivativeScheme::finite_difference) {
      std::vector<cplx> v = f_.values;
      for (int a = 0; a < axes_; ++a) {
        const double h = a < f_.grid.d ? f_.grid.dp() : f_.grid.dq();
        v = fd_axis(v, axes_, N_, a, orders[a], h);
      }
      return v;
    }
    std::vector<cplx> work(spectrum_.size());
    std::vector<int> idx(axes_);
    for (std::size_t flat = 0; flat < work.size(); ++flat) {
      split_index(flat, axes_, N_, idx.data());
      cplx factor = 1.0;
      for (int a = 0; a < axes_ && factor != 0.0; ++a) {
        const int o = orders[a];
        if (o == 0) continue;
        if (idx[a] == N_ / 2 && o % 2 == 1) {
          factor = 0.0;
        } else {
          factor *= std::pow(cplx(0.0, k_[a][idx[a]]), o);
        }
      }
      work[flat] = factor * spectrum_[flat];
    }
    std::vector<cplx> out(work.size());
    FftPlan(axes_dims(axes_, N_), +1).execute(work.data(), out.data());
    const double norm = 1.0 / static_cast<double>(out.size());
    for (auto& x : out) x *= norm;
    return out;
  }

 private:
  const PhaseFunction& f_;
  DerivativeScheme scheme_;
  int axes_;
  int N_;
  std::vector<std::vector<double>> k_;
  std::vector<cplx> spectrum_;
};

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// All multi-indices of length d with entries summing to total.
void compositions(int d, int total, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == d - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = 0; v <= total; ++v) {
    cur.push_back(v);
    compositions(d, total - v, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> compositions(int d, int total) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  compositions(d, total, cur, out);
  return out;
}

PhaseFunction moyal_exact(const PhaseFunction& f, const PhaseFunction& g) {
  const GridSpec& grid = f.grid;
  const int axes = 2 * grid.d;
  const int N = grid.n_points;
  const std::size_t size = f.values.size();
  if (size > GridSpec::kMaxPoints)
    fail(ErrorCode::InvalidArgument,
         "non-truncated star product is limited to N^{2d} <= 4096 lattice points");
  const FftPlan forward(axes_dims(axes, N), -1);
  const FftPlan inverse(axes_dims(axes, N), +1);
  std::vector<cplx> fh(size), gh(size);
  forward.execute(f.values.data(), fh.data());
  forward.execute(g.values.data(), gh.data());
  const auto k = phase_wavenumbers(grid);
  const double hb = grid.hbar;
  const double inv = 1.0 / static_cast<double>(size);

  std::vector<std::vector<int>> idx(size, std::vector<int>(axes));
  for (std::size_t b = 0; b < size; ++b) split_index(b, axes, N, idx[b].data());

  // f*g(x) = sum_a f^_a e^{i k_a x} g(q + hbar beta_a/2, p - hbar alpha_a/2),
  // alpha_a the position wavenumbers of mode a and beta_a its momentum ones.
  std::vector<cplx> out(size, 0.0);
  std::vector<cplx> shifted(size), ga(size);
  for (std::size_t a = 0; a < size; ++a) {
    if (fh[a] == 0.0) continue;
    std::vector<double> shift(axes);
    for (int ax = 0; ax < grid.d; ++ax) {
      shift[ax] = -0.5 * hb * k[grid.d + ax][idx[a][grid.d + ax]];
      shift[grid.d + ax] = 0.5 * hb * k[ax][idx[a][ax]];
    }
    for (std::size_t b = 0; b < size; ++b) {
      double phase = 0.0;
      for (int ax = 0; ax < axes; ++ax) phase += k[ax][idx[b][ax]] * shift[ax];
      shifted[b] = gh[b] * std::polar(1.0, phase);
    }
    inverse.execute(shifted.data(), ga.data());
    const cplx coeff = fh[a] * inv * inv;
    for (std::size_t x = 0; x < size; ++x) {
      long dot = 0;
      for (int ax = 0; ax < axes; ++ax) dot += static_cast<long>(idx[a][ax]) * idx[x][ax];
      const double angle = 2.0 * kPi * static_cast<double>(dot % N) / N;
      out[x] += coeff * std::polar(1.0, angle) * ga[x];
    }
  }
  PhaseFunction r(grid);
  r.values = std::move(out);
  return r;
}

}  // namespace

void GridSpec::validate() const {
  std::ostringstream os;
  if (d < 1 || d > 3) {
    os << "grid dimension d must be 1..3, got " << d;
  } else if (n_points < 4 || (n_points & (n_points - 1)) != 0) {
    os << "n_points must be a power of two >= 4, got " << n_points;
  } else if (ipow(static_cast<std::size_t>(n_points), d) > kMaxPoints) {
    os << "n_points^d must not exceed " << kMaxPoints;
  } else if (!(length > 0.0) || !std::isfinite(length)) {
    os << "length must be positive";
  } else if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    os << "hbar must be positive";
  } else {
    return;
  }
  fail(ErrorCode::InvalidArgument, os.str());
}

double GridSpec::dp() const noexcept { return 2.0 * kPi * hbar / length; }
std::size_t GridSpec::points() const noexcept {
  return ipow(static_cast<std::size_t>(n_points), d);
}
double GridSpec::cell_q() const noexcept { return std::pow(dq(), d); }
double GridSpec::cell_p() const noexcept { return std::pow(dp(), d); }

std::array<int, 3> GridSpec::unflatten(std::size_t flat) const noexcept {
  std::array<int, 3> out{0, 0, 0};
  split_index(flat, d, n_points, out.data());
  return out;
}

SpinorField::SpinorField(GridSpec g, int spin_dim) : grid(g), dim(spin_dim) {
  grid.validate();
  if (spin_dim < 1) fail(ErrorCode::InvalidArgument, "spin dimension must be >= 1");
  amplitudes.assign(static_cast<std::size_t>(dim) * grid.points(), 0.0);
}

std::span<cplx> SpinorField::component(int n) {
  return std::span<cplx>(amplitudes).subspan(static_cast<std::size_t>(n) * grid.points(),
                                             grid.points());
}

std::span<const cplx> SpinorField::component(int n) const {
  return std::span<const cplx>(amplitudes)
      .subspan(static_cast<std::size_t>(n) * grid.points(), grid.points());
}

double SpinorField::norm2() const {
  double s = 0.0;
  for (const cplx& a : amplitudes) s += std::norm(a);
  return s * grid.cell_q();
}

void SpinorField::normalize() {
  const double n = norm2();
  if (!(n > 0.0)) fail(ErrorCode::InvalidState, "cannot normalize a zero spinor field");
  const double scale = 1.0 / std::sqrt(n);
  for (cplx& a : amplitudes) a *= scale;
}

PhaseFunction::PhaseFunction(GridSpec g) : grid(g) {
  grid.validate();
  values.assign(ipow(grid.points(), 2), 0.0);
}

cplx PhaseFunction::integral() const {
  cplx s = 0.0;
  for (const cplx& v : values) s += v;
  return s * grid.cell_p() * grid.cell_q();
}

PhaseFunction sample_phase_function(
    const GridSpec& grid,
    const std::function<cplx(std::span<const double>, std::span<const double>)>& f) {
  PhaseFunction out(grid);
  const std::size_t P = grid.points();
  std::vector<double> p(grid.d), q(grid.d);
  for (std::size_t ip = 0; ip < P; ++ip) {
    const auto pi = grid.unflatten(ip);
    for (int a = 0; a < grid.d; ++a) p[a] = grid.momentum(pi[a]);
    for (std::size_t iq = 0; iq < P; ++iq) {
      const auto qi = grid.unflatten(iq);
      for (int a = 0; a < grid.d; ++a) q[a] = grid.position(qi[a]);
      out.at(ip, iq) = f(p, q);
    }
  }
  return out;
}

WignerField::WignerField(GridSpec g, int spin_dim) : grid(g), dim(spin_dim) {
  grid.validate();
  if (spin_dim < 1) fail(ErrorCode::InvalidArgument, "spin dimension must be >= 1");
  values.assign(static_cast<std::size_t>(dim) * dim * ipow(grid.points(), 2), 0.0);
}

double WignerField::total() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.cell_p() * grid.cell_q();
}

namespace detail {

std::size_t wrap_flat(const GridSpec& grid, const std::array<int, 3>& idx) {
  const int N = grid.n_points;
  std::size_t flat = 0;
  for (int a = 0; a < grid.d; ++a)
    flat = flat * N + static_cast<std::size_t>(((idx[a] % N) + N) % N);
  return flat;
}

std::vector<std::array<int, 3>> half_offsets(const GridSpec& grid) {
  const int M = grid.n_points / 2;
  const std::size_t Md = ipow(M, grid.d);
  std::vector<std::array<int, 3>> offsets(Md);
  for (std::size_t s = 0; s < Md; ++s) {
    std::array<int, 3> j{0, 0, 0};
    split_index(s, grid.d, M, j.data());
    for (int a = 0; a < grid.d; ++a) offsets[s][a] = j[a] < M / 2 ? j[a] : j[a] - M;
  }
  return offsets;
}

cplx symmetrized_pair(const GridSpec& grid, const std::array<int, 3>& q,
                      const std::array<int, 3>& j, const PairKernel& kernel) {
  const int M = grid.n_points / 2;
  int nyquist_axes[3];
  int n_nyq = 0;
  for (int ax = 0; ax < grid.d; ++ax)
    if (j[ax] == -M / 2) nyquist_axes[n_nyq++] = ax;
  cplx acc = 0.0;
  for (int mask = 0; mask < (1 << n_nyq); ++mask) {
    std::array<int, 3> jj = j;
    for (int b = 0; b < n_nyq; ++b)
      if (mask & (1 << b)) jj[nyquist_axes[b]] = M / 2;
    std::array<int, 3> plus{0, 0, 0}, minus{0, 0, 0};
    for (int ax = 0; ax < grid.d; ++ax) {
      plus[ax] = q[ax] + jj[ax];
      minus[ax] = q[ax] - jj[ax];
    }
    acc += kernel(wrap_flat(grid, minus), wrap_flat(grid, plus));
  }
  return acc / static_cast<double>(1 << n_nyq);
}

std::vector<cplx> centered_dft(std::span<const cplx> in, const GridSpec& grid, int sign) {
  const std::size_t P = grid.points();
  const int N = grid.n_points;
  // Centred index k - N/2 sits in FFT slot (k + N/2) mod N on every axis.
  auto roll = [&](std::size_t flat) {
    const auto idx = grid.unflatten(flat);
    std::size_t r = 0;
    for (int a = 0; a < grid.d; ++a) r = r * N + static_cast<std::size_t>((idx[a] + N / 2) % N);
    return r;
  };
  std::vector<cplx> buf(P), spec(P), out(P);
  for (std::size_t i = 0; i < P; ++i) buf[roll(i)] = in[i];
  FftPlan(axes_dims(grid.d, N), sign).execute(buf.data(), spec.data());
  for (std::size_t i = 0; i < P; ++i) out[i] = spec[roll(i)];
  return out;
}

PhaseFunction wigner_from_pairs(const GridSpec& grid, const PairKernel& kernel) {
  grid.validate();
  const int d = grid.d;
  const int N = grid.n_points;
  const int M = N / 2;
  const std::size_t P = grid.points();
  const std::size_t Md = ipow(M, d);
  const double prefactor = std::pow(2.0 * grid.dq() / (2.0 * kPi * grid.hbar), d);
  const FftPlan plan(axes_dims(d, M), +1);
  const auto offsets = half_offsets(grid);

  // xi = 2 j dq pairs with p = k dp through exp(2 pi i j k/M); central
  // momentum k in [-M/2, M/2) comes out in slot k mod M.
  std::vector<std::size_t> p_index(Md);
  for (std::size_t s = 0; s < Md; ++s) {
    std::size_t flat = 0;
    for (int a = 0; a < d; ++a) flat = flat * N + static_cast<std::size_t>(offsets[s][a] + N / 2);
    p_index[s] = flat;
  }

  PhaseFunction out(grid);
  parallel_for(P, [&](std::size_t q) {
    const auto qi = grid.unflatten(q);
    std::vector<cplx> a(Md), w(Md);
    for (std::size_t s = 0; s < Md; ++s) a[s] = symmetrized_pair(grid, qi, offsets[s], kernel);
    plan.execute(a.data(), w.data());
    for (std::size_t s = 0; s < Md; ++s) out.at(p_index[s], q) = prefactor * w[s];
  });
  return out;
}

}  // namespace detail

PhaseFunction wigner_continuous(std::span<const cplx> row, std::span<const cplx> col,
                                const GridSpec& grid) {
  grid.validate();
  const std::size_t P = grid.points();
  if (row.size() != P || col.size() != P)
    fail(ErrorCode::GridMismatch, "wigner_continuous: field size does not match grid");
  return detail::wigner_from_pairs(grid, [&](std::size_t minus, std::size_t plus) {
    return row[minus] * std::conj(col[plus]);
  });
}

PhaseFunction phase_derivative(const PhaseFunction& f, int axis, int n_p, int n_q,
                               DerivativeScheme scheme) {
  require_grid(f, f, "phase_derivative");
  if (axis < 0 || axis >= f.grid.d || n_p < 0 || n_q < 0)
    fail(ErrorCode::InvalidArgument, "phase_derivative: invalid axis or order");
  std::vector<int> orders(2 * f.grid.d, 0);
  orders[axis] = n_p;
  orders[f.grid.d + axis] = n_q;
  PhaseFunction out(f.grid);
  out.values = Differentiator(f, scheme)(orders);
  return out;
}

PhaseFunction moyal_star(const PhaseFunction& f, const PhaseFunction& g, int order,
                         DerivativeScheme scheme) {
  require_grid(f, g, "moyal_star");
  if (order == kMoyalExact) {
    if (scheme != DerivativeScheme::spectral)
      fail(ErrorCode::InvalidArgument, "the non-truncated star product is spectral only");
    return moyal_exact(f, g);
  }
  if (order < 0) fail(ErrorCode::InvalidArgument, "moyal_star order must be >= 0");

  const int d = f.grid.d;
  const Differentiator df(f, scheme), dg(g, scheme);
  const cplx ih2(0.0, 0.5 * f.grid.hbar);
  PhaseFunction out(f.grid);
  for (int k = 0; k <= order; ++k) {
    const cplx scale = std::pow(ih2, k);
    for (int na = 0; na <= k; ++na) {
      for (const auto& alpha : compositions(d, na)) {
        for (const auto& beta : compositions(d, k - na)) {
          double denom = 1.0;
          std::vector<int> of(2 * d), og(2 * d);
          for (int a = 0; a < d; ++a) {
            denom *= factorial(alpha[a]) * factorial(beta[a]);
            of[a] = beta[a];       // d_p^beta f
            of[d + a] = alpha[a];  // d_q^alpha f
            og[a] = alpha[a];      // d_p^alpha g
            og[d + a] = beta[a];   // d_q^beta g
          }
          const double sign = (k - na) % 2 == 0 ? 1.0 : -1.0;
          const cplx coeff = scale * sign / denom;
          const auto fv = df(of);
          const auto gv = dg(og);
          for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += coeff * fv[i] * gv[i];
        }
      }
    }
  }
  return out;
}

PhaseFunction poisson_bracket(const PhaseFunction& f, const PhaseFunction& g,
                              DerivativeScheme scheme) {
  require_grid(f, g, "poisson_bracket");
  const int d = f.grid.d;
  const Differentiator df(f, scheme), dg(g, scheme);
  PhaseFunction out(f.grid);
  for (int a = 0; a < d; ++a) {
    std::vector<int> dp(2 * d, 0), dq(2 * d, 0);
    dp[a] = 1;
    dq[d + a] = 1;
    const auto fq = df(dq), gp = dg(dp), fp = df(dp), gq = dg(dq);
    for (std::size_t i = 0; i < out.values.size(); ++i)
      out.values[i] += fq[i] * gp[i] - fp[i] * gq[i];
  }
  return out;
}

PhaseFunction free_evolution(const PhaseFunction& rho, double t, double m0) {
  require_grid(rho, rho, "free_evolution");
  if (!std::isfinite(t)) fail(ErrorCode::InvalidArgument, "free_evolution: t must be finite");
  if (!(m0 > 0.0)) fail(ErrorCode::InvalidArgument, "free_evolution: m0 must be positive");
  const GridSpec& grid = rho.grid;
  const int d = grid.d;
  const int N = grid.n_points;
  const std::size_t P = grid.points();
  const FftPlan forward(axes_dims(d, N), -1);
  const FftPlan inverse(axes_dims(d, N), +1);
  PhaseFunction out(grid);
  parallel_for(P, [&](std::size_t ip) {
    const auto pi = grid.unflatten(ip);
    double shift[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a) shift[a] = grid.momentum(pi[a]) * t / m0;
    std::vector<cplx> spec(P), res(P);
    forward.execute(rho.values.data() + ip * P, spec.data());
    for (std::size_t s = 0; s < P; ++s) {
      const auto j = grid.unflatten(s);
      cplx factor = 1.0;
      for (int a = 0; a < d; ++a) {
        const double kq = 2.0 * kPi * signed_mode(j[a], N) / grid.length;
        factor *= j[a] == N / 2 ? cplx(std::cos(kq * shift[a]), 0.0)
                                : std::polar(1.0, -kq * shift[a]);
      }
      spec[s] *= factor;
    }
    inverse.execute(spec.data(), res.data());
    for (std::size_t iq = 0; iq < P; ++iq) out.at(ip, iq) = res[iq] / static_cast<double>(P);
  });
  return out;
}

double boundary_mass(std::span<const cplx> field, const GridSpec& grid) {
  grid.validate();
  if (field.size() % grid.points() != 0)
    fail(ErrorCode::GridMismatch, "boundary_mass: field size does not match grid");
  const double edge = 0.45 * grid.length;
  double total = 0.0, near = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double w = std::norm(field[i]);
    total += w;
    const auto idx = grid.unflatten(i % grid.points());
    for (int a = 0; a < grid.d; ++a) {
      if (std::abs(grid.position(idx[a])) >= edge) {
        near += w;
        break;
      }
    }
  }
  return total > 0.0 ? near / total : 0.0;
}

double boundary_mass(const SpinorField& psi) { return boundary_mass(psi.amplitudes, psi.grid); }

std::vector<cplx> oscillator_state(const GridSpec& grid, int n, double m0, double omega) {
  grid.validate();
  if (n < 0) fail(ErrorCode::InvalidArgument, "oscillator quantum number must be >= 0");
  if (!(m0 > 0.0) || !(omega > 0.0))
    fail(ErrorCode::InvalidArgument, "oscillator mass and frequency must be positive");
  const double scale = std::sqrt(m0 * omega / grid.hbar);
  auto hermite_function = [&](int order, double q) {
    const double x = scale * q;
    double h0 = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    if (order == 0) return h0 * std::sqrt(scale);
    double h1 = std::sqrt(2.0) * x * h0;
    for (int k = 1; k < order; ++k) {
      const double h2 = std::sqrt(2.0 / (k + 1)) * x * h1 - std::sqrt(double(k) / (k + 1)) * h0;
      h0 = h1;
      h1 = h2;
    }
    return h1 * std::sqrt(scale);
  };
  std::vector<cplx> out(grid.points());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto idx = grid.unflatten(i);
    double v = 1.0;
    for (int a = 0; a < grid.d; ++a) v *= hermite_function(a == 0 ? n : 0, grid.position(idx[a]));
    out[i] = v;
  }
  return out;
}

std::vector<cplx> momentum_amplitudes(std::span<const cplx> field, const GridSpec& grid) {
  grid.validate();
  if (field.size() != grid.points())
    fail(ErrorCode::GridMismatch, "momentum_amplitudes: size mismatch");
  auto out = detail::centered_dft(field, grid, -1);
  const double norm = grid.cell_q() * std::pow(2.0 * kPi * grid.hbar, -0.5 * grid.d);
  for (auto& v : out) v *= norm;
  return out;
}

}  // namespace moyalspin
