#include <moyalspin/physics.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace moyalspin {

namespace {

constexpr double kPi = std::numbers::pi;

bool finite_all(std::initializer_list<double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

double laguerre_assoc(int n, int alpha, double x) {
  if (n < 0) return 0.0;
  return std::assoc_laguerre(static_cast<unsigned>(n), static_cast<unsigned>(alpha), x);
}

}  // namespace

void EMParams::validate() const {
  if (!finite_all({m0, e0, c, hbar, B3, b, omega, mu0}))
    fail(ErrorCode::InvalidArgument, "physical parameters must be finite");
  if (!(m0 > 0.0)) fail(ErrorCode::InvalidArgument, "m0 must be positive");
  if (!(c > 0.0)) fail(ErrorCode::InvalidArgument, "c must be positive");
  if (!(hbar > 0.0)) fail(ErrorCode::InvalidArgument, "hbar must be positive");
}

double EMParams::cyclotron() const noexcept { return std::abs(e0) * B3 / (m0 * c); }

GammaState GammaState::from_gamma012(double g0, double g1, double g2) {
  GammaState s;
  s.gamma_mn = {0.25 * (g0 + g1 + g2 + 1.0), 0.25 * (g0 - g1 - g2 + 1.0),
                0.25 * (g1 - g0 - g2 + 1.0), 0.25 * (g2 - g0 - g1 + 1.0)};
  return s;
}

GammaState GammaState::from_symbol(const DiscreteSymbol& w) {
  if (w.dim() != 2) fail(ErrorCode::DimensionMismatch, "GammaState needs a spin-1/2 table");
  GammaState s;
  s.gamma_mn = {w(0, 0).real(), w(0, 1).real(), w(1, 0).real(), w(1, 1).real()};
  return s;
}

std::array<double, 3> GammaState::gamma012() const noexcept {
  const auto& g = gamma_mn;
  return {2.0 * (g[0] + g[1]) - 1.0, 2.0 * (g[0] + g[2]) - 1.0, 2.0 * (g[0] + g[3]) - 1.0};
}

DiscreteSymbol GammaState::as_symbol() const {
  CMatrix v(2, 2);
  v << gamma_mn[0], gamma_mn[1], gamma_mn[2], gamma_mn[3];
  return {v};
}

double GammaState::sum() const noexcept {
  return gamma_mn[0] + gamma_mn[1] + gamma_mn[2] + gamma_mn[3];
}

void LandauMode::validate() const {
  params.validate();
  if (N < 0) fail(ErrorCode::InvalidArgument, "Landau index N must be >= 0");
  if (lambda0 != 1 && lambda0 != -1)
    fail(ErrorCode::InvalidArgument, "lambda0 must be +1 or -1");
  if (params.e0 == 0.0) fail(ErrorCode::InvalidArgument, "Landau levels need e0 != 0");
  if (!(params.B3 > 0.0)) fail(ErrorCode::InvalidArgument, "Landau levels need B3 > 0");
  if (!finite_all({p10, p30})) fail(ErrorCode::InvalidArgument, "p10 and p30 must be finite");
}

double pauli_symbol(const EMParams& params, const std::array<double, 3>& p,
                    const std::array<double, 3>& q, int m, int n) {
  params.validate();
  if (m < 0 || m > 1 || n < 0 || n > 1)
    fail(ErrorCode::InvalidArgument, "spin-1/2 grid indices are 0 or 1");
  const double pi1 = p[0] + params.e0 * params.B3 * q[1] / params.c;
  const double kinetic = (pi1 * pi1 + p[1] * p[1] + p[2] * p[2]) / (2.0 * params.m0);
  const double sign_n = n == 0 ? 1.0 : -1.0;
  return kinetic - params.e0 * params.hbar / (2.0 * params.m0 * params.c) * sign_n * params.B3;
}

double landau_energy(const LandauMode& mode) {
  mode.validate();
  const EMParams& P = mode.params;
  const double sgn = P.e0 > 0.0 ? 1.0 : -1.0;
  return P.hbar * P.cyclotron() * (mode.N + 0.5 - 0.5 * mode.lambda0 * sgn) +
         mode.p30 * mode.p30 / (2.0 * P.m0);
}

double landau_h0(const LandauMode& mode, double p2, double q2) {
  const EMParams& P = mode.params;
  const double w0 = P.cyclotron();
  const double shift = q2 + P.c * mode.p10 / (P.e0 * P.B3);
  return p2 * p2 / (2.0 * P.m0) + 0.5 * P.m0 * w0 * w0 * shift * shift;
}

std::array<double, 3> landau_rho0_derivatives(const LandauMode& mode, double h) {
  mode.validate();
  const EMParams& P = mode.params;
  const double hw = P.hbar * P.cyclotron();
  const double c = 4.0 / hw;
  const double x = c * h;
  const int N = mode.N;
  const double pre = (N % 2 == 0 ? 1.0 : -1.0) / (kPi * P.hbar) * std::exp(-0.5 * x);
  const double L = laguerre_assoc(N, 0, x);
  const double L1 = -laguerre_assoc(N - 1, 1, x);
  const double L2 = laguerre_assoc(N - 2, 2, x);
  return {pre * L, c * pre * (L1 - 0.5 * L), c * c * pre * (L2 - L1 + 0.25 * L)};
}

double landau_wigner_reduced(const LandauMode& mode, double p2, double q2) {
  return landau_rho0_derivatives(mode, landau_h0(mode, p2, q2))[0];
}

GammaState landau_spin_vector(int lambda0) {
  GammaState g;
  if (lambda0 == 1) {
    g.gamma_mn = {0.5, 0.0, 0.5, 0.0};
  } else if (lambda0 == -1) {
    g.gamma_mn = {0.0, 0.5, 0.0, 0.5};
  } else {
    fail(ErrorCode::InvalidArgument, "lambda0 must be +1 or -1");
  }
  return g;
}

double landau_normalization(const LandauMode& mode) {
  mode.validate();
  const EMParams& P = mode.params;
  const double w0 = P.cyclotron();
  const double p_scale = std::sqrt(P.m0 * P.hbar * w0);
  const double q_scale = std::sqrt(P.hbar / (P.m0 * w0));
  const double q_centre = -P.c * mode.p10 / (P.e0 * P.B3);
  // rho decays like exp(-(P^2 + Q^2)) in scaled units.
  const double R = 10.0 + std::sqrt(2.0 * mode.N + 1.0);
  const int n = 2 * static_cast<int>(std::ceil(R / 0.04));
  const double h = 2.0 * R / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double wi = (i == 0 || i == n) ? 0.5 : 1.0;
    const double p2 = (-R + i * h) * p_scale;
    for (int j = 0; j <= n; ++j) {
      const double wj = (j == 0 || j == n) ? 0.5 : 1.0;
      const double q2 = q_centre + (-R + j * h) * q_scale;
      sum += wi * wj * landau_wigner_reduced(mode, p2, q2);
    }
  }
  return sum * h * h * p_scale * q_scale;
}

LandauResiduals landau_residuals(const LandauMode& mode) {
  mode.validate();
  const EMParams& P = mode.params;
  const double w0 = P.cyclotron();
  const double hw = P.hbar * w0;
  LandauResiduals out;

  // Radial ODE in H0', analytic derivatives.
  const double rhs = landau_energy(mode) +
                     P.e0 * P.hbar * P.B3 * mode.lambda0 / (2.0 * P.m0 * P.c) -
                     mode.p30 * mode.p30 / (2.0 * P.m0);
  const double k2 = 0.25 * P.hbar * P.hbar * w0 * w0;
  double worst = 0.0, scale = 0.0;
  const int samples = 400;
  const double h_max = hw * (2.5 * mode.N + 10.0);
  for (int i = 0; i <= samples; ++i) {
    const double h = h_max * i / samples;
    const auto d = landau_rho0_derivatives(mode, h);
    const double t1 = h * d[0], t2 = k2 * h * d[2], t3 = k2 * d[1], t4 = rhs * d[0];
    worst = std::max(worst, std::abs(t1 - t2 - t3 - t4));
    scale = std::max({scale, std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4)});
  }
  out.ode = scale > 0.0 ? worst / scale : worst;

  // Transport equation for rho(p1, p2, q1, q2, p3, q3) = rho_0(H'(p1, p2, q2)).
  auto rho = [&](double p1, double p2, double q1, double q2, double p3, double q3) {
    (void)q1;
    (void)p3;
    (void)q3;
    const double pi1 = p1 + P.e0 * P.B3 * q2 / P.c;
    const double hprime = (pi1 * pi1 + p2 * p2) / (2.0 * P.m0);
    return landau_rho0_derivatives(mode, hprime)[0];
  };
  const double p_scale = std::sqrt(P.m0 * P.hbar * w0);
  const double q_scale = std::sqrt(P.hbar / (P.m0 * w0));
  const double q_centre = -P.c * mode.p10 / (P.e0 * P.B3);
  const double hp = 1e-3 * p_scale, hq = 1e-3 * q_scale;
  const double eB = P.e0 * P.B3 / P.c;
  double t_worst = 0.0, t_scale = 0.0, e_worst = 0.0;
  const int grid = 20;
  for (int i = 0; i <= grid; ++i) {
    for (int j = 0; j <= grid; ++j) {
      const double p1 = mode.p10;
      const double p2 = (-3.0 + 6.0 * i / grid) * p_scale;
      const double q2 = q_centre + (-3.0 + 6.0 * j / grid) * q_scale;
      const double q1 = 0.3 * q_scale, p3 = mode.p30, q3 = -0.2 * q_scale;
      const double d_q1 =
          (rho(p1, p2, q1 + hq, q2, p3, q3) - rho(p1, p2, q1 - hq, q2, p3, q3)) / (2 * hq);
      const double d_p2 =
          (rho(p1, p2 + hp, q1, q2, p3, q3) - rho(p1, p2 - hp, q1, q2, p3, q3)) / (2 * hp);
      const double d_q2 =
          (rho(p1, p2, q1, q2 + hq, p3, q3) - rho(p1, p2, q1, q2 - hq, p3, q3)) / (2 * hq);
      const double d_q3 =
          (rho(p1, p2, q1, q2, p3, q3 + hq) - rho(p1, p2, q1, q2, p3, q3 - hq)) / (2 * hq);
      const double pi1 = p1 + eB * q2;
      const double a = pi1 * (d_q1 - eB * d_p2) / P.m0;
      const double b = (p2 * d_q2 + p3 * d_q3) / P.m0;
      t_worst = std::max(t_worst, std::abs(a + b));
      t_scale = std::max(t_scale, std::abs(a) + std::abs(b));
      // p1 * rho = p1 rho - (i hbar/2) d rho/d q1; the delta factor turns p1 into p10.
      e_worst = std::max(e_worst, 0.5 * P.hbar * std::abs(d_q1));
    }
  }
  out.transport = t_scale > 0.0 ? t_worst / t_scale : t_worst;
  out.eigen_p = e_worst;
  out.normalization = std::abs(landau_normalization(mode) - 1.0);
  return out;
}

double rabi_frequency(const EMParams& params) {
  params.validate();
  const double a = params.mu0 * params.b / params.hbar;
  const double d = params.mu0 * params.B3 / params.hbar - 0.5 * params.omega;
  return std::sqrt(a * a + d * d);
}

double rabi_period(const EMParams& params) {
  const double W = rabi_frequency(params);
  if (!(W > 0.0)) fail(ErrorCode::InvalidArgument, "Rabi frequency vanishes");
  return kPi / W;
}

double pure_amplitude(const EMParams& params) {
  const double W = rabi_frequency(params);
  if (!(W > 0.0)) fail(ErrorCode::InvalidArgument, "Rabi frequency vanishes");
  const double r = params.mu0 * params.b / (params.hbar * W);
  return r * r;
}

std::array<double, 3> resonance_analytic(const EMParams& params, double a, double t) {
  params.validate();
  if (params.mu0 * params.b == 0.0)
    fail(ErrorCode::InvalidArgument, "the oscillating solution needs mu0 b != 0");
  if (!(a <= 1.0 + 1e-12)) fail(ErrorCode::InvalidArgument, "amplitude a must be <= 1");
  const double W = rabi_frequency(params);
  const double hb = params.hbar;
  const double w = params.omega;
  const double gap = 2.0 * params.mu0 * params.B3 - hb * w;
  const bool resonant =
      std::abs(gap) <= 1e-12 * std::max({1.0, std::abs(2.0 * params.mu0 * params.B3), std::abs(hb * w)});
  double offset = 0.0;
  if (resonant) {
    if (std::abs(a - 1.0) > 1e-12)
      fail(ErrorCode::ResonantDenominator,
           "at 2 mu0 B3 = hbar omega the closed form needs a = 1");
  } else {
    offset = 2.0 * params.mu0 * params.b * (a - 1.0) / gap;
  }
  const double pref = a * hb / (2.0 * params.mu0 * params.b);
  const double detune = 2.0 * params.mu0 * params.B3 / hb - w;
  const double c2 = std::cos(2.0 * W * t), s2 = std::sin(2.0 * W * t);
  const double cw = std::cos(w * t), sw = std::sin(w * t);
  const double sW = std::sin(W * t);
  return {pref * (detune * c2 * cw - 2.0 * W * s2 * sw) + offset * cw,
          2.0 * a * sW * sW - 1.0,
          -pref * (detune * c2 * sw + 2.0 * W * s2 * cw) - offset * sw};
}

std::array<double, 3> resonance_rhs(const EMParams& params, double t,
                                    const std::array<double, 3>& g) {
  const double k = 2.0 * params.mu0 / params.hbar;
  const double s = std::sin(params.omega * t), c = std::cos(params.omega * t);
  return {k * (params.b * g[1] * s + params.B3 * g[2]),
          -k * params.b * (g[0] * s + g[2] * c),
          -k * (params.B3 * g[0] - params.b * g[1] * c)};
}

Trajectory resonance_integrate(const EMParams& params, const GammaState& initial,
                               double t_end, double dt) {
  params.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorCode::InvalidArgument, "dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end))
    fail(ErrorCode::InvalidArgument, "t_end must be nonnegative");
  if (std::abs(initial.sum() - 1.0) > kStateTolerance)
    fail(ErrorCode::InvalidState, "initial gamma_mn must sum to 1");
  if (dt * rabi_frequency(params) > 0.5)
    fail(ErrorCode::StepTooLarge, "dt * Omega exceeds 0.5");

  const long steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  Trajectory out;
  out.t.reserve(steps + 1);
  out.gamma.reserve(steps + 1);
  std::array<double, 3> g = initial.gamma012();
  out.t.push_back(0.0);
  out.gamma.push_back(g);
  auto axpy = [](const std::array<double, 3>& x, double h, const std::array<double, 3>& k) {
    return std::array<double, 3>{x[0] + h * k[0], x[1] + h * k[1], x[2] + h * k[2]};
  };
  for (long i = 0; i < steps; ++i) {
    const double t = i * dt;
    const double h = std::min(dt, t_end - t);
    const auto k1 = resonance_rhs(params, t, g);
    const auto k2 = resonance_rhs(params, t + 0.5 * h, axpy(g, 0.5 * h, k1));
    const auto k3 = resonance_rhs(params, t + 0.5 * h, axpy(g, 0.5 * h, k2));
    const auto k4 = resonance_rhs(params, t + h, axpy(g, h, k3));
    for (int c = 0; c < 3; ++c) g[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    out.t.push_back(t + h);
    out.gamma.push_back(g);
  }
  return out;
}

ResonanceComparison resonance_compare(const EMParams& params, double a, double t_end,
                                      double dt) {
  const auto g0 = resonance_analytic(params, a, 0.0);
  ResonanceComparison out;
  out.trajectory =
      resonance_integrate(params, GammaState::from_gamma012(g0[0], g0[1], g0[2]), t_end, dt);
  for (std::size_t i = 0; i < out.trajectory.t.size(); ++i) {
    const auto exact = resonance_analytic(params, a, out.trajectory.t[i]);
    for (int c = 0; c < 3; ++c)
      out.max_deviation =
          std::max(out.max_deviation, std::abs(out.trajectory.gamma[i][c] - exact[c]));
  }
  return out;
}

RabiFit rabi_fit(const Trajectory& tr) {
  RabiFit fit;
  std::vector<double> times, heights;
  for (std::size_t i = 1; i + 1 < tr.t.size(); ++i) {
    const double y0 = tr.p_plus(i - 1), y1 = tr.p_plus(i), y2 = tr.p_plus(i + 1);
    if (!(y1 > y0 && y1 >= y2)) continue;
    const double curv = y0 - 2.0 * y1 + y2;
    const double delta = curv != 0.0 ? 0.5 * (y0 - y2) / curv : 0.0;
    const double step = 0.5 * (tr.t[i + 1] - tr.t[i - 1]);
    times.push_back(tr.t[i] + delta * step);
    heights.push_back(y1 - 0.25 * (y0 - y2) * delta);
  }
  fit.peaks = static_cast<int>(times.size());
  if (!heights.empty()) {
    double s = 0.0;
    for (double h : heights) s += h;
    fit.amplitude = s / heights.size();
  }
  if (times.size() >= 2) {
    const double spacing = (times.back() - times.front()) / (times.size() - 1);
    fit.omega = kPi / spacing;
  }
  return fit;
}

PurityReport purity_check(const GammaState& g, const DiscreteKernel& K) {
  if (K.dim() != 2) fail(ErrorCode::DimensionMismatch, "purity check needs a spin-1/2 kernel");
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      if (std::abs(K(k, l) - ((k * l) % 2 == 0 ? 1.0 : -1.0)) > 1e-12)
        fail(ErrorCode::InvalidArgument, "purity check needs the kernel (-1)^{kl}");
  PurityReport r;
  const auto v = g.gamma012();
  r.defect = std::abs(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] - 1.0);
  r.is_pure = r.defect <= kPurityTolerance;

  const DiscreteSymbol sym = g.as_symbol();
  const DiscreteSymbol sq = spin_star(sym, sym, K);
  double worst = 0.0;
  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 2; ++n) worst = std::max(worst, std::abs(sq(m, n) - 0.5 * sym(m, n)));
  r.star_defect = 16.0 * worst;
  r.star_is_pure = r.star_defect <= kPurityTolerance;
  return r;
}

}  // namespace moyalspin
