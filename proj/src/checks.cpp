#include <moyalspin/checks.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace moyalspin {

namespace {

CheckResult make_result(std::string name, double residual, double tolerance,
                        bool required = true) {
  return {std::move(name), residual, tolerance, residual <= tolerance, required};
}

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

CMatrix random_operator(int dim, std::uint64_t& state) {
  std::mt19937_64 rng(state);
  std::normal_distribution<double> normal;
  CMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = cplx(normal(rng), normal(rng));
  state = rng();
  return m;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.passed || !r.required; });
}

std::vector<CheckResult> quantizer_checks(const DiscreteKernel& K) {
  const SpinDim s = K.spin();
  const int D = s.dim();
  const auto [V, R] = schwinger_ops(s);
  const CMatrix I = CMatrix::Identity(D, D);
  std::vector<CheckResult> out;

  double pow_res = 0.0;
  {
    CMatrix v = I, r = I;
    for (int i = 0; i < D; ++i) {
      v = v * V.matrix();
      r = r * R.matrix();
    }
    pow_res = std::max(max_abs(v - I), max_abs(r - I));
  }
  out.push_back(make_result("schwinger_power", pow_res, kAlgebraTolerance));

  double comm_res = 0.0;
  for (int k = 0; k < D; ++k) {
    for (int l = 0; l < D; ++l) {
      const CMatrix Rk = disp_D(s, k, 0).matrix();
      const CMatrix Vl = disp_D(s, 0, l).matrix();
      const double a = std::numbers::pi * k * l / D;
      comm_res = std::max(comm_res, max_abs(std::exp(cplx(0, -a)) * Rk * Vl -
                                            std::exp(cplx(0, a)) * Vl * Rk));
    }
  }
  out.push_back(make_result("schwinger_commutation", comm_res, kAlgebraTolerance));

  double unit_res = 0.0, adj_res = 0.0, tr_res = 0.0, orth_res = 0.0;
  std::vector<CMatrix> Ds;
  for (int k = 0; k < D; ++k)
    for (int l = 0; l < D; ++l) Ds.push_back(disp_D(s, k, l).matrix());
  for (int k = 0; k < D; ++k) {
    for (int l = 0; l < D; ++l) {
      const CMatrix& d = Ds[k * D + l];
      unit_res = std::max(unit_res, max_abs(d * d.adjoint() - I));
      adj_res = std::max(adj_res, max_abs(d.adjoint() - disp_D(s, -k, -l).matrix()));
      const double expect = (k == 0 && l == 0) ? D : 0.0;
      tr_res = std::max(tr_res, std::abs(d.trace() - expect));
      for (int kp = 0; kp < D; ++kp) {
        for (int lp = 0; lp < D; ++lp) {
          const cplx t = (d * Ds[kp * D + lp].adjoint()).trace();
          const double e = (k == kp && l == lp) ? D : 0.0;
          orth_res = std::max(orth_res, std::abs(t - e));
        }
      }
    }
  }
  out.push_back(make_result("displacement_unitary", unit_res, kAlgebraTolerance));
  out.push_back(make_result("displacement_adjoint", adj_res, kAlgebraTolerance));
  out.push_back(make_result("displacement_trace", tr_res, kAlgebraTolerance));
  out.push_back(make_result("displacement_orthogonality", orth_res, kAlgebraTolerance));

  const QuantizerTable Q(K);
  double herm_res = 0.0, qtr_res = 0.0, overlap_res = 0.0;
  for (int m = 0; m < D; ++m) {
    for (int n = 0; n < D; ++n) {
      const CMatrix& w = Q(m, n).matrix();
      herm_res = std::max(herm_res, max_abs(w - w.adjoint()));
      qtr_res = std::max(qtr_res, std::abs(w.trace() - 1.0));
      for (int mp = 0; mp < D; ++mp) {
        for (int np = 0; np < D; ++np) {
          const cplx t = (w * Q(mp, np).matrix()).trace();
          const double e = (m == mp && n == np) ? D : 0.0;
          overlap_res = std::max(overlap_res, std::abs(t - e));
        }
      }
    }
  }
  out.push_back(make_result("quantizer_hermitian", herm_res, kAlgebraTolerance));
  out.push_back(make_result("quantizer_unit_trace", qtr_res, kAlgebraTolerance));
  // Trace orthogonality of the quantizers is expected exactly when |K| = 1.
  out.push_back(make_result("quantizer_orthogonality", overlap_res, kAlgebraTolerance,
                            K.is_unimodular()));

  std::uint64_t seed = 0x5eedULL + static_cast<std::uint64_t>(D);
  double rt_res = 0.0;
  for (int trial = 0; trial < 8; ++trial) {
    const SpinOperator A(random_operator(D, seed));
    const SpinOperator back = spin_dequantize(spin_symbol(A, K), K);
    rt_res = std::max(rt_res, max_abs_diff(A, back));
  }
  out.push_back(make_result("symbol_round_trip", rt_res, kAlgebraTolerance * 10));
  return out;
}

std::vector<CheckResult> star_checks(const DiscreteKernel& K, int pairs,
                                     std::uint64_t seed) {
  const int D = K.dim();
  double star_res = 0.0, box_res = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const CMatrix A = random_operator(D, seed);
    const CMatrix B = random_operator(D, seed);
    const CMatrix AB = A * B;
    const double scale = std::max(1.0, max_abs(AB));
    const SpinOperator a(A), b(B), ab(AB);

    const DiscreteSymbol fs = spin_star(spin_symbol(a, K), spin_symbol(b, K), K);
    const DiscreteSymbol oracle = spin_symbol(ab, K);
    star_res = std::max(star_res, max_abs(fs.values - oracle.values) /
                                      std::max(1.0, max_abs(oracle.values)));

    const TildeSymbol tb = boxtimes_discrete(tilde(a), tilde(b));
    box_res = std::max(box_res, max_abs(tb.values - tilde(ab).values) / scale);
  }
  return {make_result("star_vs_matrix_product", star_res, kStarTolerance),
          make_result("boxtimes_vs_matrix_product", box_res, kStarTolerance)};
}

}  // namespace moyalspin
