#ifndef MOYALSPIN_PHYSICS_HPP
#define MOYALSPIN_PHYSICS_HPP

// Spin-1/2 worked systems: Landau levels in the gauge A = (-q2 B3, 0, 0)
// with B = (0, 0, B3), and magnetic resonance in the rotating field
// B = (b cos wt, -b sin wt, B3).

#include <moyalspin/spin_core.hpp>

#include <array>
#include <vector>

namespace moyalspin {

struct EMParams {
  double m0 = 1.0;
  double e0 = 1.0;
  double c = 1.0;
  double hbar = 1.0;
  double B3 = 1.0;
  double b = 0.5;
  double omega = 2.0;
  double mu0 = 1.0;

  // m0 > 0, c > 0, hbar > 0, everything finite.
  void validate() const;
  // |e0| B3/(m0 c)
  double cyclotron() const noexcept;
};

// Spin part of a spin-1/2 Wigner function, gamma_mn = gamma(phi_m, n).
struct GammaState {
  std::array<double, 4> gamma_mn{0.25, 0.25, 0.25, 0.25};  // 00, 01, 10, 11

  static GammaState from_gamma012(double g0, double g1, double g2);
  static GammaState from_symbol(const DiscreteSymbol& w);  // takes the real part
  std::array<double, 3> gamma012() const noexcept;
  DiscreteSymbol as_symbol() const;
  double sum() const noexcept;
};

struct LandauMode {
  int N = 0;
  int lambda0 = 1;
  double p10 = 0.0;
  double p30 = 1.0;
  EMParams params;

  // N >= 0, lambda0 = +-1, e0 != 0, B3 > 0.
  void validate() const;
};

// Symbol of the Pauli Hamiltonian at (p, q, phi_m, n) for B = (0, 0, B3)
// and A = (-q2 B3, 0, 0).
double pauli_symbol(const EMParams& params, const std::array<double, 3>& p,
                    const std::array<double, 3>& q, int m, int n);

double landau_energy(const LandauMode& mode);

// p2^2/2m0 + m0 w0^2 (q2 + c p10/(e0 B3))^2/2
double landau_h0(const LandauMode& mode, double p2, double q2);

// rho_{0,N} at a point of the reduced (p2, q2) plane; the delta factors in
// p1 and p3 are kept analytic.
double landau_wigner_reduced(const LandauMode& mode, double p2, double q2);

// rho_{0,N} as a function of H0' and its first two derivatives.
std::array<double, 3> landau_rho0_derivatives(const LandauMode& mode, double h);

// (1,0,1,0)/2 for lambda0 = +1 and (0,1,0,1)/2 for lambda0 = -1.
GammaState landau_spin_vector(int lambda0);

struct LandauResiduals {
  double ode = 0.0;        // relative, over a sample of H0' values
  double transport = 0.0;  // relative, central differences with h = 1e-3
  double eigen_p = 0.0;    // |p1 * rho - p10 rho|, q1-independence
  double normalization = 0.0;  // |integral of rho_{0,N} - 1|
};

LandauResiduals landau_residuals(const LandauMode& mode);

// Integral of rho_{0,N} over the (p2, q2) plane by the trapezoid rule.
double landau_normalization(const LandauMode& mode);

// sqrt((mu0 b/hbar)^2 + (mu0 B3/hbar - omega/2)^2)
double rabi_frequency(const EMParams& params);

// P+(t) = a sin^2(Omega t) peaks every pi/Omega.
double rabi_period(const EMParams& params);

// Amplitude a for which the closed-form trajectory stays pure:
// (mu0 b/(hbar Omega))^2.
double pure_amplitude(const EMParams& params);

// (gamma0, gamma1, gamma2) of the closed-form oscillating solution.
std::array<double, 3> resonance_analytic(const EMParams& params, double a, double t);

// d/dt (gamma0, gamma1, gamma2) of the rotating-field spin equations.
std::array<double, 3> resonance_rhs(const EMParams& params, double t,
                                    const std::array<double, 3>& g);

struct Trajectory {
  std::vector<double> t;
  std::vector<std::array<double, 3>> gamma;  // (gamma0, gamma1, gamma2)

  double p_plus(std::size_t i) const { return 0.5 * (gamma[i][1] + 1.0); }
};

// Fixed-step RK4 from `initial`. Throws StepTooLarge if dt Omega > 0.5.
Trajectory resonance_integrate(const EMParams& params, const GammaState& initial,
                               double t_end, double dt);

struct ResonanceComparison {
  Trajectory trajectory;
  double max_deviation = 0.0;  // max over samples and components
};

// Starts from the closed-form solution at t = 0 and integrates.
ResonanceComparison resonance_compare(const EMParams& params, double a, double t_end,
                                      double dt);

struct RabiFit {
  double omega = 0.0;      // pi / mean spacing of P+ maxima
  double amplitude = 0.0;  // mean height of P+ maxima
  int peaks = 0;
};

// Locates P+ maxima with parabolic refinement.
RabiFit rabi_fit(const Trajectory& trajectory);

struct PurityReport {
  bool is_pure = false;       // quadratic route
  double defect = 0.0;        // |gamma0^2 + gamma1^2 + gamma2^2 - 1|
  bool star_is_pure = false;  // star-product route
  double star_defect = 0.0;   // 16 max |gamma * gamma - gamma/2|
};

inline constexpr double kPurityTolerance = 1e-10;

// K must be the spin-1/2 kernel (-1)^{kl}.
PurityReport purity_check(const GammaState& g, const DiscreteKernel& K);

}  // namespace moyalspin

#endif
