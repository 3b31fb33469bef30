#include <moyalspin/moyalspin.h>

#include <moyalspin/checks.hpp>
#include <moyalspin/composite.hpp>
#include <moyalspin/grid.hpp>
#include <moyalspin/physics.hpp>
#include <moyalspin/spin_core.hpp>

#include <cstring>
#include <new>
#include <optional>
#include <string>

struct ms_kernel {
  moyalspin::DiscreteKernel kernel;
};

struct ms_report {
  std::vector<moyalspin::CheckResult> results;
};

struct ms_wigner {
  moyalspin::WignerField field;
};

struct ms_trajectory {
  moyalspin::Trajectory trajectory;
};

namespace {

using namespace moyalspin;

thread_local std::string g_last_error;

ms_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return MS_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionParity: return MS_ERR_DIMENSION_PARITY;
    case ErrorCode::KernelZero: return MS_ERR_KERNEL_ZERO;
    case ErrorCode::InvalidState: return MS_ERR_INVALID_STATE;
    case ErrorCode::DimensionMismatch: return MS_ERR_DIMENSION_MISMATCH;
    case ErrorCode::GridMismatch: return MS_ERR_GRID_MISMATCH;
    case ErrorCode::ResonantDenominator: return MS_ERR_RESONANT_DENOMINATOR;
    case ErrorCode::StepTooLarge: return MS_ERR_STEP_TOO_LARGE;
  }
  return MS_ERR_INTERNAL;
}

template <class F>
ms_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return MS_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return MS_ERR_INTERNAL;
}

void require(const void* p, const char* what) {
  if (p == nullptr) fail(ErrorCode::InvalidArgument, std::string(what) + " is null");
}

cplx from_c(ms_complex z) { return {z.re, z.im}; }
ms_complex to_c(cplx z) { return {z.real(), z.imag()}; }

CMatrix read_matrix(int dim, const ms_complex* data) {
  require(data, "matrix buffer");
  if (dim < 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
  CMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = from_c(data[i * dim + j]);
  return m;
}

void write_matrix(const CMatrix& m, ms_complex* out) {
  require(out, "output buffer");
  const int dim = static_cast<int>(m.rows());
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) out[i * dim + j] = to_c(m(i, j));
}

const DiscreteKernel& kernel_of(const ms_kernel* k) {
  require(k, "kernel");
  return k->kernel;
}

GridSpec grid_of(const ms_grid_spec* g) {
  require(g, "grid");
  GridSpec spec{g->d, g->n_points, g->length, g->hbar};
  spec.validate();
  return spec;
}

ms_grid_spec grid_to_c(const GridSpec& g) { return {g.d, g.n_points, g.length, g.hbar}; }

EMParams params_of(const ms_em_params* p) {
  require(p, "params");
  EMParams e;
  e.m0 = p->m0;
  e.e0 = p->e0;
  e.c = p->c;
  e.hbar = p->hbar;
  e.B3 = p->B3;
  e.b = p->b;
  e.omega = p->omega;
  e.mu0 = p->mu0;
  return e;
}

LandauMode mode_of(const ms_landau_mode* m) {
  require(m, "mode");
  LandauMode mode;
  mode.N = m->N;
  mode.lambda0 = m->lambda0;
  mode.p10 = m->p10;
  mode.p30 = m->p30;
  mode.params = params_of(&m->params);
  return mode;
}

GammaState gamma_of(const double* g) {
  require(g, "gamma_mn");
  GammaState s;
  for (int i = 0; i < 4; ++i) s.gamma_mn[i] = g[i];
  return s;
}

std::vector<cplx> read_field(const ms_complex* data, std::size_t n) {
  require(data, "field buffer");
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = from_c(data[i]);
  return v;
}

PhaseFunction read_phase(const GridSpec& g, const ms_complex* data) {
  PhaseFunction f(g);
  f.values = read_field(data, g.points() * g.points());
  return f;
}

void write_phase(const PhaseFunction& f, ms_complex* out) {
  require(out, "output buffer");
  for (std::size_t i = 0; i < f.values.size(); ++i) out[i] = to_c(f.values[i]);
}

KernelVariant variant_of(ms_kernel_variant v) {
  switch (v) {
    case MS_KERNEL_PARITY_ODD: return KernelVariant::parity_odd;
    case MS_KERNEL_PARITY_EVEN_HALF_ODD: return KernelVariant::parity_even_half_odd;
    case MS_KERNEL_COSINE: return KernelVariant::cosine;
    case MS_KERNEL_CUSTOM: return KernelVariant::custom;
  }
  fail(ErrorCode::InvalidArgument, "unknown kernel variant");
}

}  // namespace

extern "C" {

const char* ms_version(void) { return "0.1.0"; }

const char* ms_status_name(ms_status status) {
  switch (status) {
    case MS_OK: return "Ok";
    case MS_ERR_INVALID_ARGUMENT: return to_string(ErrorCode::InvalidArgument);
    case MS_ERR_DIMENSION_PARITY: return to_string(ErrorCode::DimensionParity);
    case MS_ERR_KERNEL_ZERO: return to_string(ErrorCode::KernelZero);
    case MS_ERR_INVALID_STATE: return to_string(ErrorCode::InvalidState);
    case MS_ERR_DIMENSION_MISMATCH: return to_string(ErrorCode::DimensionMismatch);
    case MS_ERR_GRID_MISMATCH: return to_string(ErrorCode::GridMismatch);
    case MS_ERR_RESONANT_DENOMINATOR: return to_string(ErrorCode::ResonantDenominator);
    case MS_ERR_STEP_TOO_LARGE: return to_string(ErrorCode::StepTooLarge);
    case MS_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* ms_last_error(void) { return g_last_error.c_str(); }

ms_tolerances ms_default_tolerances(void) {
  return {kAlgebraTolerance, kStarTolerance, kStateTolerance, kPurityTolerance};
}

ms_status ms_kernel_create(int spin_dim, ms_kernel_variant variant, double epsilon,
                           ms_kernel** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    *out = new ms_kernel{
        DiscreteKernel::make(SpinDim::from_dim(spin_dim), variant_of(variant), epsilon)};
  });
}

ms_status ms_kernel_create_default(int spin_dim, ms_kernel** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    *out = new ms_kernel{DiscreteKernel::make_default(SpinDim::from_dim(spin_dim))};
  });
}

ms_status ms_kernel_from_table(int spin_dim, const ms_complex* table, ms_kernel** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    *out = new ms_kernel{
        DiscreteKernel::from_table(SpinDim::from_dim(spin_dim), read_matrix(spin_dim, table))};
  });
}

void ms_kernel_destroy(ms_kernel* kernel) { delete kernel; }

double ms_default_epsilon(int spin_dim) {
  if (spin_dim < 1) return 0.0;
  return DiscreteKernel::default_epsilon(SpinDim::from_dim(spin_dim));
}

int ms_kernel_dim(const ms_kernel* kernel) { return kernel ? kernel->kernel.dim() : 0; }

double ms_kernel_epsilon(const ms_kernel* kernel) {
  return kernel ? kernel->kernel.epsilon() : 0.0;
}

ms_kernel_variant ms_kernel_get_variant(const ms_kernel* kernel) {
  if (!kernel) return MS_KERNEL_CUSTOM;
  switch (kernel->kernel.variant()) {
    case KernelVariant::parity_odd: return MS_KERNEL_PARITY_ODD;
    case KernelVariant::parity_even_half_odd: return MS_KERNEL_PARITY_EVEN_HALF_ODD;
    case KernelVariant::cosine: return MS_KERNEL_COSINE;
    case KernelVariant::custom: return MS_KERNEL_CUSTOM;
  }
  return MS_KERNEL_CUSTOM;
}

ms_status ms_kernel_table(const ms_kernel* kernel, ms_complex* out) {
  return guarded([&] { write_matrix(kernel_of(kernel).table(), out); });
}

ms_status ms_disp_D(int spin_dim, long k, long l, ms_complex* out) {
  return guarded(
      [&] { write_matrix(disp_D(SpinDim::from_dim(spin_dim), k, l).matrix(), out); });
}

ms_status ms_quantizer(const ms_kernel* kernel, int m, int n, ms_complex* out) {
  return guarded([&] { write_matrix(spin_quantizer(kernel_of(kernel), m, n).matrix(), out); });
}

ms_status ms_spin_wigner(const ms_kernel* kernel, const ms_complex* rho, ms_complex* out) {
  return guarded([&] {
    const auto& K = kernel_of(kernel);
    write_matrix(spin_wigner(SpinOperator(read_matrix(K.dim(), rho)), K).values, out);
  });
}

ms_status ms_spin_symbol(const ms_kernel* kernel, const ms_complex* op, ms_complex* out) {
  return guarded([&] {
    const auto& K = kernel_of(kernel);
    write_matrix(spin_symbol(SpinOperator(read_matrix(K.dim(), op)), K).values, out);
  });
}

ms_status ms_spin_dequantize(const ms_kernel* kernel, const ms_complex* symbol,
                             ms_complex* out) {
  return guarded([&] {
    const auto& K = kernel_of(kernel);
    write_matrix(spin_dequantize(DiscreteSymbol{read_matrix(K.dim(), symbol)}, K).matrix(),
                 out);
  });
}

ms_status ms_spin_star(const ms_kernel* kernel, const ms_complex* f, const ms_complex* g,
                       ms_complex* out) {
  return guarded([&] {
    const auto& K = kernel_of(kernel);
    const DiscreteSymbol a{read_matrix(K.dim(), f)}, b{read_matrix(K.dim(), g)};
    write_matrix(spin_star(a, b, K).values, out);
  });
}

ms_status ms_tilde(int spin_dim, const ms_complex* op, ms_complex* out) {
  return guarded(
      [&] { write_matrix(tilde(SpinOperator(read_matrix(spin_dim, op))).values, out); });
}

ms_status ms_boxtimes(int spin_dim, const ms_complex* f, const ms_complex* g,
                      ms_complex* out) {
  return guarded([&] {
    const TildeSymbol a{read_matrix(spin_dim, f)}, b{read_matrix(spin_dim, g)};
    write_matrix(boxtimes_discrete(a, b).values, out);
  });
}

ms_status ms_quantizer_checks(const ms_kernel* kernel, ms_report** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    *out = new ms_report{quantizer_checks(kernel_of(kernel))};
  });
}

ms_status ms_star_checks(const ms_kernel* kernel, int pairs, uint64_t seed, ms_report** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (pairs < 1) fail(ErrorCode::InvalidArgument, "pairs must be >= 1");
    *out = new ms_report{star_checks(kernel_of(kernel), pairs, seed)};
  });
}

size_t ms_report_count(const ms_report* report) {
  return report ? report->results.size() : 0;
}

ms_status ms_report_entry(const ms_report* report, size_t index, const char** name,
                          double* residual, double* tolerance, int* passed, int* required) {
  return guarded([&] {
    require(report, "report");
    if (index >= report->results.size())
      fail(ErrorCode::InvalidArgument, "report index out of range");
    const CheckResult& r = report->results[index];
    if (name) *name = r.name.c_str();
    if (residual) *residual = r.residual;
    if (tolerance) *tolerance = r.tolerance;
    if (passed) *passed = r.passed ? 1 : 0;
    if (required) *required = r.required ? 1 : 0;
  });
}

int ms_report_passed(const ms_report* report) {
  return report && all_passed(report->results) ? 1 : 0;
}

void ms_report_destroy(ms_report* report) { delete report; }

ms_grid_spec ms_grid_default(void) { return grid_to_c(GridSpec{}); }

ms_status ms_grid_validate(const ms_grid_spec* grid) {
  return guarded([&] { (void)grid_of(grid); });
}

size_t ms_grid_points(const ms_grid_spec* grid) {
  size_t n = 0;
  if (guarded([&] { n = grid_of(grid).points(); }) != MS_OK) return 0;
  return n;
}

double ms_grid_position(const ms_grid_spec* grid, int k) {
  return grid ? GridSpec{grid->d, grid->n_points, grid->length, grid->hbar}.position(k) : 0.0;
}

double ms_grid_momentum(const ms_grid_spec* grid, int j) {
  return grid ? GridSpec{grid->d, grid->n_points, grid->length, grid->hbar}.momentum(j) : 0.0;
}

ms_status ms_oscillator_state(const ms_grid_spec* grid, int n, double m0, double omega,
                              ms_complex* out) {
  return guarded([&] {
    require(out, "out");
    const auto v = oscillator_state(grid_of(grid), n, m0, omega);
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_c(v[i]);
  });
}

ms_status ms_wigner_continuous(const ms_grid_spec* grid, const ms_complex* row,
                               const ms_complex* col, ms_complex* out) {
  return guarded([&] {
    const GridSpec g = grid_of(grid);
    const auto r = read_field(row, g.points());
    const auto c = read_field(col, g.points());
    write_phase(wigner_continuous(r, c, g), out);
  });
}

ms_status ms_moyal_star(const ms_grid_spec* grid, const ms_complex* f, const ms_complex* g,
                        int order, ms_derivative_scheme scheme, ms_complex* out) {
  return guarded([&] {
    const GridSpec spec = grid_of(grid);
    const DerivativeScheme sc = scheme == MS_DERIVATIVE_FINITE_DIFFERENCE
                                    ? DerivativeScheme::finite_difference
                                    : DerivativeScheme::spectral;
    write_phase(moyal_star(read_phase(spec, f), read_phase(spec, g), order, sc), out);
  });
}

ms_status ms_free_evolution(const ms_grid_spec* grid, const ms_complex* rho, double t,
                            double m0, ms_complex* out) {
  return guarded([&] {
    const GridSpec spec = grid_of(grid);
    write_phase(free_evolution(read_phase(spec, rho), t, m0), out);
  });
}

ms_status ms_wigner_pure(const ms_grid_spec* grid, int spin_dim, const ms_complex* amplitudes,
                         const ms_kernel* kernel, ms_wigner** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    const GridSpec g = grid_of(grid);
    SpinorField psi(g, spin_dim);
    psi.amplitudes = read_field(amplitudes, psi.amplitudes.size());
    *out = new ms_wigner{full_wigner(HybridState::pure(std::move(psi)), kernel_of(kernel))};
  });
}

ms_status ms_wigner_mixed(const ms_grid_spec* grid, int spin_dim, const ms_complex* density,
                          const ms_kernel* kernel, ms_wigner** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    const GridSpec g = grid_of(grid);
    HybridOperator rho(g, spin_dim);
    rho.values = read_field(density, rho.values.size());
    *out = new ms_wigner{full_wigner(HybridState::mixed(std::move(rho)), kernel_of(kernel))};
  });
}

void ms_wigner_destroy(ms_wigner* w) { delete w; }

int ms_wigner_dim(const ms_wigner* w) { return w ? w->field.dim : 0; }

ms_grid_spec ms_wigner_grid(const ms_wigner* w) {
  return w ? grid_to_c(w->field.grid) : ms_grid_spec{0, 0, 0.0, 0.0};
}

size_t ms_wigner_size(const ms_wigner* w) { return w ? w->field.values.size() : 0; }

ms_status ms_wigner_values(const ms_wigner* w, double* out) {
  return guarded([&] {
    require(w, "wigner");
    require(out, "out");
    std::memcpy(out, w->field.values.data(), w->field.values.size() * sizeof(double));
  });
}

double ms_wigner_total(const ms_wigner* w) { return w ? w->field.total() : 0.0; }

ms_status ms_wigner_marginals(const ms_wigner* w, double* position, double* momentum,
                              double* number, double* phase) {
  return guarded([&] {
    require(w, "wigner");
    const Marginals m = marginals(w->field);
    auto copy = [](const std::vector<double>& v, double* dst) {
      if (dst) std::memcpy(dst, v.data(), v.size() * sizeof(double));
    };
    copy(m.position, position);
    copy(m.momentum, momentum);
    copy(m.number, number);
    copy(m.phase, phase);
  });
}

ms_status ms_wigner_kernel_change(const ms_wigner* w, const ms_kernel* from,
                                  const ms_kernel* to, ms_wigner** out) {
  return guarded([&] {
    require(w, "wigner");
    require(out, "out");
    *out = nullptr;
    *out = new ms_wigner{kernel_change(w->field, kernel_of(from), kernel_of(to))};
  });
}

ms_em_params ms_em_default(void) {
  const EMParams e;
  return {e.m0, e.e0, e.c, e.hbar, e.B3, e.b, e.omega, e.mu0};
}

ms_landau_mode ms_landau_default(void) {
  const LandauMode m;
  return {m.N, m.lambda0, m.p10, m.p30, ms_em_default()};
}

ms_status ms_landau_energy(const ms_landau_mode* mode, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = landau_energy(mode_of(mode));
  });
}

ms_status ms_landau_wigner(const ms_landau_mode* mode, double p2, double q2, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = landau_wigner_reduced(mode_of(mode), p2, q2);
  });
}

ms_status ms_landau_centre(const ms_landau_mode* mode, double* q2_centre) {
  return guarded([&] {
    require(q2_centre, "out");
    const LandauMode m = mode_of(mode);
    m.validate();
    *q2_centre = -m.params.c * m.p10 / (m.params.e0 * m.params.B3);
  });
}

ms_status ms_landau_residuals_compute(const ms_landau_mode* mode, ms_landau_residuals* out) {
  return guarded([&] {
    require(out, "out");
    const LandauResiduals r = landau_residuals(mode_of(mode));
    *out = {r.ode, r.transport, r.eigen_p, r.normalization};
  });
}

ms_status ms_landau_spin_vector(int lambda0, double gamma_mn[4]) {
  return guarded([&] {
    require(gamma_mn, "out");
    const GammaState g = landau_spin_vector(lambda0);
    for (int i = 0; i < 4; ++i) gamma_mn[i] = g.gamma_mn[i];
  });
}

ms_status ms_rabi_frequency(const ms_em_params* params, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = rabi_frequency(params_of(params));
  });
}

ms_status ms_rabi_period(const ms_em_params* params, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = rabi_period(params_of(params));
  });
}

ms_status ms_pure_amplitude(const ms_em_params* params, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = pure_amplitude(params_of(params));
  });
}

ms_status ms_resonance_analytic(const ms_em_params* params, double a, double t,
                                double gamma012[3]) {
  return guarded([&] {
    require(gamma012, "out");
    const auto g = resonance_analytic(params_of(params), a, t);
    for (int i = 0; i < 3; ++i) gamma012[i] = g[i];
  });
}

ms_status ms_resonance_integrate(const ms_em_params* params, const double gamma_mn[4],
                                 double t_end, double dt, ms_trajectory** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    *out = new ms_trajectory{
        resonance_integrate(params_of(params), gamma_of(gamma_mn), t_end, dt)};
  });
}

ms_status ms_resonance_compare(const ms_em_params* params, double a, double t_end, double dt,
                               ms_trajectory** out, double* max_deviation) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    ResonanceComparison c = resonance_compare(params_of(params), a, t_end, dt);
    if (max_deviation) *max_deviation = c.max_deviation;
    *out = new ms_trajectory{std::move(c.trajectory)};
  });
}

size_t ms_trajectory_length(const ms_trajectory* tr) {
  return tr ? tr->trajectory.t.size() : 0;
}

ms_status ms_trajectory_sample(const ms_trajectory* tr, size_t index, double* t,
                               double gamma012[3]) {
  return guarded([&] {
    require(tr, "trajectory");
    if (index >= tr->trajectory.t.size())
      fail(ErrorCode::InvalidArgument, "trajectory index out of range");
    if (t) *t = tr->trajectory.t[index];
    if (gamma012)
      for (int i = 0; i < 3; ++i) gamma012[i] = tr->trajectory.gamma[index][i];
  });
}

ms_status ms_trajectory_rabi_fit(const ms_trajectory* tr, double* omega, double* amplitude,
                                 int* peaks) {
  return guarded([&] {
    require(tr, "trajectory");
    const RabiFit f = rabi_fit(tr->trajectory);
    if (omega) *omega = f.omega;
    if (amplitude) *amplitude = f.amplitude;
    if (peaks) *peaks = f.peaks;
  });
}

void ms_trajectory_destroy(ms_trajectory* tr) { delete tr; }

ms_status ms_purity_check(const double gamma_mn[4], const ms_kernel* kernel,
                          ms_purity_report* out) {
  return guarded([&] {
    require(out, "out");
    const PurityReport r = purity_check(gamma_of(gamma_mn), kernel_of(kernel));
    *out = {r.is_pure ? 1 : 0, r.defect, r.star_is_pure ? 1 : 0, r.star_defect};
  });
}

}  // extern "C"
