// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <moyalspin/composite.hpp>
#include <moyalspin/physics.hpp>

#include "oracles.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <unistd.h>

#ifndef MOYALSPIN_CLI_PATH
#error "MOYALSPIN_CLI_PATH must name the CLI executable"
#endif

using namespace moyalspin;
using oracle::Mat;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Clock/shift periodicity, commutation and displacement relations.
Outcome schwinger_algebra() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int D = 2; D <= 6; ++D) {
    const auto [V, R] = schwinger_ops(SpinDim::from_dim(D));
    const Mat I = Mat::Identity(D, D);
    worst = std::max(worst, oracle::max_abs(V.matrix() - oracle::clock(D)));
    worst = std::max(worst, oracle::max_abs(R.matrix() - oracle::shift(D)));
    worst = std::max(worst, oracle::max_abs(oracle::mpow(V.matrix(), D) - I));
    worst = std::max(worst, oracle::max_abs(oracle::mpow(R.matrix(), D) - I));
    for (int k = 0; k < D; ++k)
      for (int l = 0; l < D; ++l) {
        const Mat lhs = oracle::mpow(R.matrix(), k) * oracle::mpow(V.matrix(), l);
        const Mat rhs = oracle::expi(2.0 * oracle::pi * k * l / D) *
                        oracle::mpow(V.matrix(), l) * oracle::mpow(R.matrix(), k);
        worst = std::max(worst, oracle::max_abs(lhs - rhs));
      }
    for (int k = -D; k <= D; ++k)
      for (int l = -D; l <= D; ++l) {
        const Mat d = disp_D(SpinDim::from_dim(D), k, l).matrix();
        worst = std::max(worst, oracle::max_abs(d - oracle::displacement(D, k, l)));
        worst = std::max(worst, oracle::max_abs(d * d.adjoint() - I));
        worst = std::max(worst,
                         oracle::max_abs(d.adjoint() - disp_D(SpinDim::from_dim(D), -k, -l).matrix()));
        const bool origin = ((k % D) + D) % D == 0 && ((l % D) + D) % D == 0;
        const cplx tr = d.trace();
        worst = std::max(worst, origin ? std::abs(std::abs(tr) - D) : std::abs(tr));
      }
    for (int k = 0; k < D; ++k)
      for (int l = 0; l < D; ++l)
        for (int kp = 0; kp < D; ++kp)
          for (int lp = 0; lp < D; ++lp) {
            const Mat a = disp_D(SpinDim::from_dim(D), k, l).matrix();
            const Mat b = disp_D(SpinDim::from_dim(D), kp, lp).matrix();
            const Mat ab = disp_D(SpinDim::from_dim(D), k + kp, l + lp).matrix();
            const cplx phase = oracle::expi(oracle::pi * (k * lp - kp * l) / D);
            worst = std::max(worst, oracle::max_abs(a * b - phase * ab));
            const cplx ip = (a.adjoint() * b).trace();
            const double ref = (k == kp && l == lp) ? D : 0.0;
            worst = std::max(worst, std::abs(ip - ref));
          }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-12 && secs < 1.0,
          "max residual " + fmt("%.3g", worst) + ", " + fmt("%.3f", secs) + " s"};
}

// 2. Spin-1/2 quantizer in Pauli form.
Outcome pauli_quantizer() {
  const DiscreteKernel K = DiscreteKernel::make(SpinDim(1), KernelVariant::cosine, oracle::pi / 4);
  double worst = 0.0;
  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 2; ++n) {
      const double a = m ? -1.0 : 1.0, b = (m + n) % 2 ? -1.0 : 1.0, c = n ? -1.0 : 1.0;
      const Mat ref = 0.5 * (oracle::pauli(0) + a * oracle::pauli(1) + b * oracle::pauli(2) +
                             c * oracle::pauli(3));
      worst = std::max(worst, oracle::max_abs(spin_quantizer(K, m, n).matrix() - ref));
    }
  return {worst <= 1e-14, "max entry error " + fmt("%.3g", worst)};
}

double orthogonality_defect(const DiscreteKernel& K) {
  const int D = K.dim();
  const QuantizerTable table(K);
  double worst = 0.0;
  for (int a = 0; a < D * D; ++a)
    for (int b = 0; b < D * D; ++b) {
      const cplx t = (table(a / D, a % D).matrix() * table(b / D, b % D).matrix()).trace();
      worst = std::max(worst, std::abs(t - (a == b ? double(D) : 0.0)));
    }
  return worst;
}

// 3. Trace-orthogonality holds for the parity kernel and fails for cosine.
Outcome orthogonality_dichotomy() {
  const double parity =
      orthogonality_defect(DiscreteKernel::make(SpinDim(2), KernelVariant::parity_odd, 0.0));
  const double cosine =
      orthogonality_defect(DiscreteKernel::make(SpinDim(1), KernelVariant::cosine, 0.3));
  return {parity <= 1e-12 && cosine >= 1e-2,
          "parity s=2 defect " + fmt("%.3g", parity) + ", cosine s=1 eps=0.3 defect " +
              fmt("%.3g", cosine)};
}

double relative(const CMatrix& got, const Mat& ref) {
  return oracle::max_abs(got - ref) / std::max(1e-300, oracle::max_abs(ref));
}

// 4. Star product and twisted convolution against dense matrix products.
Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  oracle::Rng rng(20240601);
  double worst = 0.0;
  for (int D = 2; D <= 5; ++D) {
    const SpinDim s = SpinDim::from_dim(D);
    const DiscreteKernel K = DiscreteKernel::make_default(s);
    for (int pair = 0; pair < 100; ++pair) {
      const Mat A = rng.matrix(D), B = rng.matrix(D);
      const DiscreteSymbol f = spin_symbol(SpinOperator(A), K);
      const DiscreteSymbol g = spin_symbol(SpinOperator(B), K);
      worst = std::max(worst, relative(spin_star(f, g, K).values, oracle::symbol(A * B, K.table())));
      const TildeSymbol tf = tilde(SpinOperator(A)), tg = tilde(SpinOperator(B));
      worst = std::max(worst, relative(boxtimes_discrete(tf, tg).values, oracle::tilde(A * B)));
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-10 && secs < 5.0,
          "max relative error " + fmt("%.3g", worst) + ", " + fmt("%.3f", secs) + " s"};
}

// 5. Oscillator eigenstate Wigner functions against the Laguerre form.
Outcome continuous_wigner() {
  const GridSpec g{1, 128, 20.0, 1.0};
  double worst = 0.0;
  for (int n = 0; n <= 4; ++n) {
    std::vector<cplx> psi(g.points());
    for (int k = 0; k < g.n_points; ++k) psi[k] = oracle::hermite_function(n, g.position(k));
    const PhaseFunction W = wigner_continuous(psi, psi, g);
    for (int j = 0; j < g.n_points; ++j)
      for (int k = 0; k < g.n_points; ++k)
        worst = std::max(worst, std::abs(W.at(j, k) - oracle::oscillator_wigner(
                                                           n, g.momentum(j), g.position(k))));
  }
  return {worst < 1e-6, "max abs error " + fmt("%.3g", worst)};
}

// 6. Landau energies, radial equation and normalization.
Outcome landau_levels() {
  oracle::Rng rng(6);
  double e_err = 0.0, ode = 0.0, norm = 0.0, radial = 0.0;
  for (int N = 0; N <= 5; ++N) {
    for (int lambda0 : {1, -1}) {
      LandauMode mode;
      mode.N = N;
      mode.lambda0 = lambda0;
      mode.p10 = rng.uniform(-1, 1);
      mode.p30 = rng.uniform(-1, 1);
      mode.params.B3 = rng.uniform(0.5, 3.0);
      mode.params.e0 = (N % 2 ? -1.0 : 1.0) * rng.uniform(0.5, 2.0);
      const EMParams& P = mode.params;
      const double w0 = std::abs(P.e0) * P.B3 / (P.m0 * P.c);
      const double sgn = P.e0 > 0 ? 1.0 : -1.0;
      const double E = P.hbar * w0 * (N + 0.5 - 0.5 * lambda0 * sgn) +
                       mode.p30 * mode.p30 / (2.0 * P.m0);
      e_err = std::max(e_err, std::abs(landau_energy(mode) - E) / std::max(1.0, std::abs(E)));
      const LandauResiduals r = landau_residuals(mode);
      ode = std::max(ode, r.ode);
      norm = std::max(norm, std::abs(landau_normalization(mode) - 1.0));

      // (2 pi/w0) int rho_0(H) dH by Simpson with the oracle radial form.
      const double hw = P.hbar * w0;
      auto rho = [&](double H) {
        return (N % 2 ? -1.0 : 1.0) / (oracle::pi * P.hbar) * std::exp(-2.0 * H / hw) *
               oracle::laguerre(N, 4.0 * H / hw);
      };
      const double top = hw * (20.0 + 4.0 * N);
      const int steps = 20000;
      const double h = top / steps;
      double s = rho(0.0) + rho(top);
      for (int i = 1; i < steps; ++i) s += (i % 2 ? 4.0 : 2.0) * rho(i * h);
      radial = std::max(radial, std::abs(2.0 * oracle::pi / w0 * s * h / 3.0 - 1.0));
    }
  }
  return {e_err <= 1e-15 && ode < 1e-9 && norm <= 1e-8 && radial <= 1e-8,
          "energy " + fmt("%.3g", e_err) + ", ode " + fmt("%.3g", ode) + ", normalization " +
              fmt("%.3g", norm) + ", radial quadrature " + fmt("%.3g", radial)};
}

// 7. RK4 against the closed form, Rabi frequency and resonant amplitude.
Outcome magnetic_resonance() {
  double dev = 0.0, freq = 0.0, amp = 0.0;
  auto params = [](double omega) {
    EMParams P;
    P.B3 = 1.0;
    P.b = 0.5;
    P.omega = omega;
    return P;
  };
  for (double omega : {2.0, 1.8, 2.3}) {
    const EMParams P = params(omega);
    const double T = rabi_period(P);
    const ResonanceComparison cmp = resonance_compare(P, pure_amplitude(P), 10.0 * T, T / 1000.0);
    dev = std::max(dev, cmp.max_deviation);
    const RabiFit fit = rabi_fit(cmp.trajectory);
    freq = std::max(freq, fit.peaks >= 2 ? std::abs(fit.omega / rabi_frequency(P) - 1.0) : 1.0);
    if (omega == 2.0) amp = std::abs(fit.amplitude - 1.0);
  }
  return {dev < 1e-6 && freq <= 1e-3 && amp <= 1e-6,
          "deviation " + fmt("%.3g", dev) + ", frequency fit " + fmt("%.3g", freq) +
              ", resonant amplitude error " + fmt("%.3g", amp)};
}

// 8. Star-product purity against the quadratic form.
Outcome purity_equivalence() {
  oracle::Rng rng(8);
  const DiscreteKernel K = DiscreteKernel::make(SpinDim(1), KernelVariant::parity_even_half_odd, 0.0);
  int agree = 0, correct = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const bool pure = i < 50;
    const Mat rho = pure ? rng.pure_density(2) : rng.mixed_density(2);
    const GammaState g = GammaState::from_symbol(spin_wigner(SpinOperator(rho), K));
    const PurityReport r = purity_check(g, K);
    agree += r.is_pure == r.star_is_pure;
    correct += r.is_pure == pure;
    worst = std::max(worst, std::abs(r.defect - r.star_defect));
  }
  return {agree == 100 && correct == 100 && worst <= 1e-10,
          std::to_string(agree) + "/100 agree, " + std::to_string(correct) +
              "/100 classified, defect gap " + fmt("%.3g", worst)};
}

// 9. All four marginals of random mixed states against direct computation.
Outcome marginals_check() {
  const GridSpec g{1, 64, 20.0, 1.0};
  const int N = g.n_points, D = 2;
  const double dq = g.dq();
  const DiscreteKernel K = DiscreteKernel::make_default(SpinDim(1));
  const Mat phi = phase_basis(SpinDim(1));
  oracle::Rng rng(9);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int rank = 1 + trial % 3;
    std::vector<SpinorField> states;
    std::vector<double> w;
    double total = 0.0;
    for (int r = 0; r < rank; ++r) {
      SpinorField psi(g, D);
      for (int level = 0; level <= 2; ++level) {
        const Eigen::VectorXcd c = rng.unit_vector(D) * rng.uniform(0.2, 1.0);
        for (int a = 0; a < D; ++a)
          for (int k = 0; k < N; ++k)
            psi.component(a)[k] += c(a) * oracle::hermite_function(level, g.position(k));
      }
      psi.normalize();
      states.push_back(psi);
      w.push_back(rng.uniform(0.1, 1.0));
      total += w.back();
    }
    HybridOperator rho(g, D);
    for (int r = 0; r < rank; ++r) {
      w[r] /= total;
      for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b)
          for (int x = 0; x < N; ++x)
            for (int y = 0; y < N; ++y)
              rho.at(a, b, x, y) +=
                  w[r] * states[r].component(a)[x] * std::conj(states[r].component(b)[y]);
    }
    const Marginals M = marginals(full_wigner(HybridState::mixed(rho), K));

    // Direct values from the density kernel.
    Mat spin = Mat::Zero(D, D);
    for (int a = 0; a < D; ++a)
      for (int b = 0; b < D; ++b)
        for (int x = 0; x < N; ++x) spin(a, b) += rho.at(a, b, x, x) * dq;
    for (int x = 0; x < N; ++x) {
      double pos = 0.0;
      for (int a = 0; a < D; ++a) pos += rho.at(a, a, x, x).real();
      worst = std::max(worst, std::abs(M.position[x] - pos));
    }
    for (int j = 0; j < N; ++j) {
      const double p = g.momentum(j);
      double mom = 0.0;
      for (int a = 0; a < D; ++a)
        for (int x = 0; x < N; ++x)
          for (int y = 0; y < N; ++y)
            mom += (rho.at(a, a, x, y) * oracle::expi(-p * (g.position(x) - g.position(y)) / g.hbar))
                       .real() *
                   dq * dq / (2.0 * oracle::pi * g.hbar);
      worst = std::max(worst, std::abs(M.momentum[j] - mom));
    }
    for (int i = 0; i < D; ++i) {
      worst = std::max(worst, std::abs(M.number[i] - spin(i, i).real()));
      const cplx ph = (phi.col(i).adjoint() * spin * phi.col(i))(0);
      worst = std::max(worst, std::abs(M.phase[i] - ph.real()));
    }
  }
  return {worst <= 1e-8, "max marginal error " + fmt("%.3g", worst)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 10. Repeated CLI runs with one config give identical bytes.
Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("moyalspin_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  bool same = true;
  int runs = 0;
  const std::string cfg = (dir / "cfg.json").string();
  for (const char* scenario : {"quantizer-check", "star-check", "wigner", "landau", "resonance"}) {
    std::ofstream(cfg) << "{\"scenario\": \"" << scenario
                       << "\", \"grid\": {\"n_points\": 64}, \"star\": {\"pairs\": 20}}";
    const std::string prefix = (dir / scenario).string();
    std::string csv, json;
    for (int rep = 0; rep < 2; ++rep) {
      const std::string cmd = std::string("\"") + MOYALSPIN_CLI_PATH + "\" --config \"" + cfg +
                              "\" --output \"" + prefix + "\" run >/dev/null 2>&1";
      const int raw = std::system(cmd.c_str());
      if (!WIFEXITED(raw) || WEXITSTATUS(raw) != 0) same = false;
      const std::string c = slurp(prefix + ".csv"), j = slurp(prefix + ".json");
      if (c.empty() || j.empty()) same = false;
      if (rep == 1 && (c != csv || j != json)) same = false;
      csv = c;
      json = j;
      fs::remove(prefix + ".csv");
      fs::remove(prefix + ".json");
      ++runs;
    }
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return {same, std::to_string(runs) + " runs over 5 scenarios, outputs " +
                    (same ? "byte-identical" : "differ")};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"Schwinger algebra, s+1 = 2..6", schwinger_algebra},
      {"spin-1/2 quantizer Pauli form", pauli_quantizer},
      {"quantizer orthogonality dichotomy", orthogonality_dichotomy},
      {"star and twisted convolution vs matrix products", oracle_equivalence},
      {"oscillator Wigner functions, N=128, L=20", continuous_wigner},
      {"Landau levels", landau_levels},
      {"magnetic resonance", magnetic_resonance},
      {"purity equivalence", purity_equivalence},
      {"marginals of random mixed states, N=64, s=1", marginals_check},
      {"CLI determinism", determinism},
  };
  int failed = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.passed;
    std::printf("%s  %2d  %s: %s\n", o.passed ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
