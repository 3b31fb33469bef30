#include <doctest.h>

#include <moyalspin/spin_core.hpp>

#include "oracles.hpp"

using namespace moyalspin;
using oracle::max_abs;
using oracle::Mat;

namespace {

DiscreteKernel qubit_kernel() {
  return DiscreteKernel::make(SpinDim(1), KernelVariant::cosine, std::numbers::pi / 4);
}

// Every kernel the library can build for a given dimension.
std::vector<DiscreteKernel> kernels_for(int D) {
  std::vector<DiscreteKernel> out;
  const SpinDim s = SpinDim::from_dim(D);
  out.push_back(DiscreteKernel::make_default(s));
  if (D % 2 == 1) out.push_back(DiscreteKernel::make(s, KernelVariant::parity_odd, 0.0));
  if (D % 2 == 0 && (D / 2) % 2 == 1)
    out.push_back(DiscreteKernel::make(s, KernelVariant::parity_even_half_odd, 0.0));
  out.push_back(DiscreteKernel::make(s, KernelVariant::cosine, 0.3));
  return out;
}

}  // namespace

TEST_CASE("phase basis columns") {
  const CMatrix b1 = phase_basis(SpinDim(1));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(b1(0, 0) - r) < 1e-15);
  CHECK(std::abs(b1(1, 0) - r) < 1e-15);
  CHECK(std::abs(b1(0, 1) - r) < 1e-15);
  CHECK(std::abs(b1(1, 1) + r) < 1e-15);

  const CMatrix b2 = phase_basis(SpinDim(2));
  CHECK(std::abs(b2(2, 1) - oracle::expi(4 * oracle::pi / 3) / std::sqrt(3.0)) < 1e-15);

  for (int D = 1; D <= 8; ++D) {
    const CMatrix b = phase_basis(SpinDim::from_dim(D));
    CHECK(max_abs(b.adjoint() * b - Mat::Identity(D, D)) < 1e-12);
  }
}

TEST_CASE("schwinger operators") {
  const auto [V1, R1] = schwinger_ops(SpinDim(1));
  CHECK(max_abs(V1.matrix() - oracle::pauli(3)) < 1e-15);
  CHECK(max_abs(R1.matrix() - oracle::pauli(1)) < 1e-15);

  for (int D = 1; D <= 8; ++D) {
    const auto [V, R] = schwinger_ops(SpinDim::from_dim(D));
    CHECK(max_abs(V.matrix() - oracle::clock(D)) < 1e-12);
    CHECK(max_abs(R.matrix() - oracle::shift(D)) < 1e-12);
    CHECK(V.is_unitary(1e-12));
    CHECK(R.is_unitary(1e-12));
    // R|n> = |n - 1>
    for (int n = 0; n < D; ++n) CHECK(std::abs(R(((n - 1) % D + D) % D, n) - 1.0) < 1e-12);
  }
}

TEST_CASE("schwinger commutation rule for s <= 7") {
  for (int D = 1; D <= 8; ++D) {
    const auto [V, R] = schwinger_ops(SpinDim::from_dim(D));
    for (int k = 0; k < D; ++k) {
      for (int l = 0; l < D; ++l) {
        const Mat Rk = oracle::mpow(R.matrix(), k);
        const Mat Vl = oracle::mpow(V.matrix(), l);
        const double a = oracle::pi * k * l / D;
        CHECK(max_abs(oracle::expi(-a) * Rk * Vl - oracle::expi(a) * Vl * Rk) < 1e-12);
      }
    }
  }
}

TEST_CASE("displacement operators match their matrix elements") {
  for (int D = 1; D <= 8; ++D) {
    const SpinDim s = SpinDim::from_dim(D);
    CHECK(max_abs(disp_D(s, 0, 0).matrix() - Mat::Identity(D, D)) < 1e-15);
    for (long k = -2 * D; k <= 2 * D; ++k) {
      for (long l = -2 * D; l <= 2 * D; ++l) {
        const Mat d = disp_D(s, k, l).matrix();
        CHECK(max_abs(d - oracle::displacement(D, k, l)) < 1e-12);
        CHECK(max_abs(d.adjoint() - disp_D(s, -k, -l).matrix()) < 1e-12);
        // Phase from the original integers: D(k + D, l) = (-1)^l D(k, l).
        const double sign = (l % 2 == 0) ? 1.0 : -1.0;
        CHECK(max_abs(disp_D(s, k + D, l).matrix() - sign * d) < 1e-12);
      }
    }
  }
}

TEST_CASE("displacement traces and trace orthogonality") {
  for (int D = 2; D <= 6; ++D) {
    const SpinDim s = SpinDim::from_dim(D);
    for (int k = 0; k < D; ++k) {
      for (int l = 0; l < D; ++l) {
        const Mat d = disp_D(s, k, l).matrix();
        CHECK(max_abs(d * d.adjoint() - Mat::Identity(D, D)) < 1e-12);
        CHECK(std::abs(d.trace() - ((k == 0 && l == 0) ? double(D) : 0.0)) < 1e-12);
        for (int kp = 0; kp < D; ++kp)
          for (int lp = 0; lp < D; ++lp) {
            const cplx t = (d * disp_D(s, kp, lp).matrix().adjoint()).trace();
            CHECK(std::abs(t - ((k == kp && l == lp) ? double(D) : 0.0)) < 1e-12);
          }
      }
    }
  }
}

TEST_CASE("kernel construction") {
  const auto K = qubit_kernel();
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) CHECK(std::abs(K(k, l) - ((k * l) % 2 ? -1.0 : 1.0)) < 1e-15);

  const auto K2 = DiscreteKernel::make(SpinDim(2), KernelVariant::cosine, 0.0);
  CHECK(std::abs(K2(1, 1) - 0.5) < 1e-15);

  for (int D = 1; D <= 8; ++D)
    for (const auto& k : kernels_for(D)) CHECK(k(0, 0) == cplx(1.0));

  CHECK(DiscreteKernel::default_epsilon(SpinDim(1)) == doctest::Approx(oracle::pi / 4));
  CHECK(DiscreteKernel::default_epsilon(SpinDim(2)) == 0.0);
  CHECK(DiscreteKernel::default_epsilon(SpinDim(5)) == doctest::Approx(oracle::pi / 4));
  // The default cosine kernel exists in every dimension.
  for (int D = 1; D <= 16; ++D)
    CHECK_NOTHROW(DiscreteKernel::make_default(SpinDim::from_dim(D)));

  // s+1 = 6: -1 unless kl = 0 mod 4
  const auto K6 = DiscreteKernel::make(SpinDim(5), KernelVariant::parity_even_half_odd, 0.0);
  CHECK(K6(2, 2) == cplx(1.0));
  CHECK(K6(1, 2) == cplx(-1.0));
  CHECK(K6(3, 3) == cplx(-1.0));
  CHECK(K6.is_unimodular());
  CHECK_FALSE(DiscreteKernel::make(SpinDim(1), KernelVariant::cosine, 0.3).is_unimodular());
}

TEST_CASE("kernel errors") {
  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK_THROWS_AS(DiscreteKernel::make(SpinDim(1), KernelVariant::parity_odd, 0.0), Error);
  CHECK(code_of([] { DiscreteKernel::make(SpinDim(1), KernelVariant::parity_odd, 0.0); }) ==
        ErrorCode::DimensionParity);
  CHECK(code_of([] {
          DiscreteKernel::make(SpinDim(3), KernelVariant::parity_even_half_odd, 0.0);
        }) == ErrorCode::DimensionParity);
  CHECK(code_of([] {
          DiscreteKernel::make(SpinDim(2), KernelVariant::parity_even_half_odd, 0.0);
        }) == ErrorCode::DimensionParity);
  // cos(pi/2 + 0) = 0 at (k,l) = (1,1) for s+1 = 2
  try {
    DiscreteKernel::make(SpinDim(1), KernelVariant::cosine, 0.0);
    FAIL("expected KernelZero");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::KernelZero);
    CHECK(std::string(e.what()).find("(k,l)=(1,1)") != std::string::npos);
  }
  // Tables must satisfy the boundary and reflection constraints.
  Mat bad = Mat::Ones(3, 3);
  bad(0, 1) = 2.0;
  CHECK_THROWS_AS(DiscreteKernel::from_table(SpinDim(2), bad), Error);
  Mat skew = Mat::Ones(3, 3);
  skew(1, 1) = 2.0;
  CHECK_THROWS_AS(DiscreteKernel::from_table(SpinDim(2), skew), Error);
  Mat zero = DiscreteKernel::make(SpinDim(2), KernelVariant::parity_odd, 0.0).table();
  zero(1, 2) = 0.0;
  CHECK(code_of([&] { DiscreteKernel::from_table(SpinDim(2), zero); }) == ErrorCode::KernelZero);
}

TEST_CASE("spin-1/2 quantizer equals the Pauli form") {
  const QuantizerTable Q(qubit_kernel());
  for (int m = 0; m < 2; ++m) {
    for (int n = 0; n < 2; ++n) {
      const double sm = m % 2 ? -1.0 : 1.0, sn = n % 2 ? -1.0 : 1.0;
      const Mat expect = 0.5 * (oracle::pauli(0) + sm * oracle::pauli(1) +
                                sm * sn * oracle::pauli(2) + sn * oracle::pauli(3));
      CHECK(max_abs(Q(m, n).matrix() - expect) < 1e-14);
    }
  }
}

TEST_CASE("quantizers are Hermitian with unit trace and match literal summation") {
  for (int D = 1; D <= 6; ++D) {
    for (const auto& K : kernels_for(D)) {
      const QuantizerTable Q(K);
      for (int m = 0; m < D; ++m) {
        for (int n = 0; n < D; ++n) {
          const Mat w = Q(m, n).matrix();
          CHECK(Q(m, n).is_hermitian(1e-12));
          CHECK(std::abs(w.trace() - 1.0) < 1e-12);
          CHECK(max_abs(w - oracle::quantizer(K.table(), m, n)) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("quantizer overlaps: orthogonal iff |K| = 1") {
  auto worst_overlap = [](const DiscreteKernel& K) {
    const int D = K.dim();
    const QuantizerTable Q(K);
    double worst = 0.0;
    for (int a = 0; a < D * D; ++a)
      for (int b = 0; b < D * D; ++b) {
        const cplx t = (Q(a / D, a % D).matrix() * Q(b / D, b % D).matrix()).trace();
        worst = std::max(worst, std::abs(t - (a == b ? double(D) : 0.0)));
      }
    return worst;
  };
  CHECK(worst_overlap(DiscreteKernel::make(SpinDim(2), KernelVariant::parity_odd, 0.0)) < 1e-12);
  CHECK(worst_overlap(DiscreteKernel::make(SpinDim(4), KernelVariant::parity_odd, 0.0)) < 1e-12);
  CHECK(worst_overlap(
            DiscreteKernel::make(SpinDim(5), KernelVariant::parity_even_half_odd, 0.0)) < 1e-12);
  CHECK(worst_overlap(qubit_kernel()) < 1e-12);
  CHECK(worst_overlap(DiscreteKernel::make(SpinDim(1), KernelVariant::cosine, 0.3)) >= 1e-2);
  CHECK(worst_overlap(DiscreteKernel::make(SpinDim(2), KernelVariant::cosine, 0.0)) >= 1e-2);

  // Pairwise trace products against the oracle quantizers for s = 2, eps = 0.
  const auto K = DiscreteKernel::make(SpinDim(2), KernelVariant::cosine, 0.0);
  const QuantizerTable Q(K);
  for (int a = 0; a < 9; ++a)
    for (int b = 0; b < 9; ++b) {
      const cplx lib = (Q(a / 3, a % 3).matrix() * Q(b / 3, b % 3).matrix()).trace();
      const cplx ref = (oracle::quantizer(K.table(), a / 3, a % 3) *
                        oracle::quantizer(K.table(), b / 3, b % 3))
                           .trace();
      CHECK(std::abs(lib - ref) < 1e-12);
    }
}

TEST_CASE("discrete Wigner function") {
  const auto K = qubit_kernel();
  const DiscreteSymbol u = spin_wigner(SpinOperator(Mat::Identity(2, 2) / 2.0), K);
  CHECK(max_abs(u.values - Mat::Constant(2, 2, 0.25)) < 1e-15);

  Mat up = Mat::Zero(2, 2);
  up(0, 0) = 1.0;
  const DiscreteSymbol w = spin_wigner(SpinOperator(up), K);
  CHECK(std::abs(w(0, 0) + w(1, 0) - 1.0) < 1e-14);
  CHECK(std::abs(w(0, 1) + w(1, 1)) < 1e-14);

  oracle::Rng rng(11);
  for (int D = 1; D <= 6; ++D) {
    for (const auto& Kd : kernels_for(D)) {
      for (int trial = 0; trial < 5; ++trial) {
        const Mat rho = rng.mixed_density(D);
        const DiscreteSymbol W = spin_wigner(SpinOperator(rho), Kd);
        CHECK(W.values.imag().cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(W.values.sum() - 1.0) < 1e-12);
        const Mat phi = phase_basis(SpinDim::from_dim(D));
        for (int i = 0; i < D; ++i) {
          CHECK(std::abs(W.values.col(i).sum() - rho(i, i)) < 1e-12);
          CHECK(std::abs(W.values.row(i).sum() - (phi.col(i).adjoint() * rho * phi.col(i))(0)) <
                1e-12);
        }
        for (int m = 0; m < D; ++m)
          for (int n = 0; n < D; ++n) {
            const cplx ref = (rho * oracle::quantizer(Kd.table(), m, n)).trace() / double(D);
            CHECK(std::abs(W(m, n) - ref) < 1e-12);
          }
      }
    }
  }
}

TEST_CASE("invalid density operators are rejected") {
  const auto K = qubit_kernel();
  Mat nonherm = Mat::Identity(2, 2) / 2.0;
  nonherm(0, 1) = 0.3;
  CHECK_THROWS_AS(spin_wigner(SpinOperator(nonherm), K), Error);
  CHECK_THROWS_AS(spin_wigner(SpinOperator(Mat::Identity(2, 2)), K), Error);
  Mat negative = Mat::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  try {
    spin_wigner(SpinOperator(negative), K);
    FAIL("expected InvalidState");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidState);
  }
}

TEST_CASE("symbol map examples") {
  const auto K = qubit_kernel();
  const DiscreteSymbol one = spin_symbol(SpinOperator::identity(2), K);
  CHECK(max_abs(one.values - Mat::Ones(2, 2)) < 1e-14);
  for (int m = 0; m < 2; ++m) {
    for (int n = 0; n < 2; ++n) {
      const double sm = m ? -1.0 : 1.0, sn = n ? -1.0 : 1.0;
      CHECK(std::abs(spin_symbol(SpinOperator(oracle::pauli(3)), K)(m, n) - sn) < 1e-14);
      CHECK(std::abs(spin_symbol(SpinOperator(oracle::pauli(1)), K)(m, n) - sm) < 1e-14);
      CHECK(std::abs(spin_symbol(SpinOperator(oracle::pauli(2)), K)(m, n) - sm * sn) < 1e-14);
    }
  }
}

TEST_CASE("symbol recovered as a trace against the quantizer") {
  oracle::Rng rng(61);
  // Parity kernel: f(m,n) = Tr{A omega(m,n)}.
  const DiscreteKernel parity = DiscreteKernel::make(SpinDim(2), KernelVariant::parity_odd, 0.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Mat A = rng.matrix(3);
    const DiscreteSymbol f = spin_symbol(SpinOperator(A), parity);
    for (int m = 0; m < 3; ++m)
      for (int n = 0; n < 3; ++n)
        CHECK(std::abs(f(m, n) - (A * oracle::quantizer(parity.table(), m, n)).trace()) < 1e-12);
  }
  // Cosine kernel with eps != 0: the dual operator carries 1/K weights.
  for (int D = 2; D <= 4; ++D) {
    const DiscreteKernel K = DiscreteKernel::make(SpinDim::from_dim(D), KernelVariant::cosine, 0.3);
    const Mat A = rng.matrix(D);
    const DiscreteSymbol f = spin_symbol(SpinOperator(A), K);
    double plain = 0.0;
    for (int m = 0; m < D; ++m)
      for (int n = 0; n < D; ++n) {
        Mat dual = Mat::Zero(D, D);
        for (int k = 0; k < D; ++k)
          for (int l = 0; l < D; ++l)
            dual += oracle::expi(2.0 * oracle::pi * (k * m + l * n) / D) / K(k, l) *
                    oracle::displacement(D, k, l).adjoint();
        dual /= double(D);
        CHECK(std::abs(f(m, n) - (A * dual).trace()) < 1e-12);
        plain = std::max(plain, std::abs(f(m, n) - (A * oracle::quantizer(K.table(), m, n)).trace()));
      }
    CHECK(plain > 1e-3);
  }
}

TEST_CASE("symbol map properties on random inputs") {
  oracle::Rng rng(7);
  for (int D = 1; D <= 6; ++D) {
    const Mat phi = phase_basis(SpinDim::from_dim(D));
    for (const auto& K : kernels_for(D)) {
      for (int trial = 0; trial < 6; ++trial) {
        const Mat A = rng.matrix(D);
        const DiscreteSymbol f = spin_symbol(SpinOperator(A), K);
        CHECK(max_abs(spin_dequantize(f, K).matrix() - A) < 1e-12);
        CHECK(max_abs(f.values - oracle::symbol(A, K.table())) < 1e-10);

        Mat table(D, D);
        for (int i = 0; i < D; ++i)
          for (int j = 0; j < D; ++j) table(i, j) = rng.complex_normal();
        const DiscreteSymbol g{table};
        CHECK(max_abs(spin_symbol(spin_dequantize(g, K), K).values - table) < 1e-12);

        const DiscreteSymbol h = spin_symbol(SpinOperator(rng.hermitian(D)), K);
        CHECK(h.values.imag().cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, max_abs(h.values)));

        // Functions of n-hat or phi-hat alone keep a single argument.
        Eigen::VectorXcd vals(D);
        for (int i = 0; i < D; ++i) vals(i) = rng.complex_normal();
        const DiscreteSymbol fn = spin_symbol(SpinOperator(Mat(vals.asDiagonal())), K);
        const DiscreteSymbol fphi =
            spin_symbol(SpinOperator(Mat(phi * vals.asDiagonal() * phi.adjoint())), K);
        for (int m = 0; m < D; ++m)
          for (int n = 0; n < D; ++n) {
            CHECK(std::abs(fn(m, n) - vals(n)) < 1e-12);
            CHECK(std::abs(fphi(m, n) - vals(m)) < 1e-12);
          }
      }
    }
  }
}

TEST_CASE("twisted convolution") {
  oracle::Rng rng(3);
  for (int D = 1; D <= 5; ++D) {
    Mat unit = Mat::Zero(D, D);
    unit(0, 0) = 1.0;
    for (int trial = 0; trial < 10; ++trial) {
      const Mat A = rng.matrix(D), B = rng.matrix(D), C = rng.matrix(D);
      const TildeSymbol ta{oracle::tilde(A)}, tb{oracle::tilde(B)}, tc{oracle::tilde(C)};
      CHECK(max_abs(tilde(SpinOperator(A)).values - ta.values) < 1e-12);
      CHECK(max_abs(boxtimes_discrete(TildeSymbol{unit}, tb).values - tb.values) < 1e-14);
      const Mat ab = boxtimes_discrete(ta, tb).values;
      CHECK(max_abs(ab - oracle::tilde(A * B)) < 1e-10 * std::max(1.0, max_abs(A * B)));
      if (D <= 4) {
        const Mat left = boxtimes_discrete(TildeSymbol{ab}, tc).values;
        const Mat right = boxtimes_discrete(ta, boxtimes_discrete(tb, tc)).values;
        CHECK(max_abs(left - right) < 1e-10 * std::max(1.0, max_abs(left)));
      }
      CHECK(max_abs(from_tilde(ta).matrix() - A) < 1e-12);
    }
  }
  CHECK_THROWS_AS(boxtimes_discrete(TildeSymbol{Mat::Ones(2, 2)}, TildeSymbol{Mat::Ones(3, 3)}),
                  Error);
}

TEST_CASE("star product examples") {
  const auto K = qubit_kernel();
  const DiscreteSymbol s1 = spin_symbol(SpinOperator(oracle::pauli(1)), K);
  const DiscreteSymbol s2 = spin_symbol(SpinOperator(oracle::pauli(2)), K);
  const DiscreteSymbol s3 = spin_symbol(SpinOperator(oracle::pauli(3)), K);
  CHECK(max_abs(spin_star(s3, s3, K).values - Mat::Ones(2, 2)) < 1e-14);

  const DiscreteSymbol br = spin_star_bracket(s1, s2, K);
  const DiscreteSymbol expect =
      spin_symbol(SpinOperator(Mat(cplx(0, 2) * oracle::pauli(3))), K);
  CHECK(max_abs(br.values - expect.values) < 1e-14);

  // sigma_3 eigen-system on the grid: symbol(sigma_3) * gamma = lambda0 gamma.
  Mat up(2, 2), down(2, 2);
  up << 0.5, 0.0, 0.5, 0.0;
  down << 0.0, 0.5, 0.0, 0.5;
  CHECK(max_abs(spin_star(s3, DiscreteSymbol{up}, K).values - up) < 1e-14);
  CHECK(max_abs(spin_star(s3, DiscreteSymbol{down}, K).values + down) < 1e-14);
  Mat rho_up = Mat::Zero(2, 2);
  rho_up(0, 0) = 1.0;
  CHECK(max_abs(spin_wigner(SpinOperator(rho_up), K).values - up) < 1e-14);
}

TEST_CASE("star product against matrix products, associativity") {
  oracle::Rng rng(5);
  for (int D = 2; D <= 5; ++D) {
    for (const auto& K : kernels_for(D)) {
      for (int trial = 0; trial < 10; ++trial) {
        const Mat A = rng.matrix(D), B = rng.matrix(D), C = rng.matrix(D);
        const Mat K0 = K.table();
        const DiscreteSymbol fa{oracle::symbol(A, K0)}, fb{oracle::symbol(B, K0)},
            fc{oracle::symbol(C, K0)};
        const Mat ref = oracle::symbol(A * B, K0);
        CHECK(max_abs(spin_star(fa, fb, K).values - ref) < 1e-9 * std::max(1.0, max_abs(ref)));
        const Mat left = spin_star(spin_star(fa, fb, K), fc, K).values;
        const Mat right = spin_star(fa, spin_star(fb, fc, K), K).values;
        CHECK(max_abs(left - right) < 1e-9 * std::max(1.0, max_abs(left)));
        CHECK(max_abs(spin_star_bracket(fa, fb, K).values -
                      (spin_star(fa, fb, K).values - spin_star(fb, fa, K).values)) < 1e-12 *
                                                                                        std::max(1.0, max_abs(ref)));
      }
    }
  }
}

TEST_CASE("explicit spin-1/2 star product agrees with the general route") {
  const auto K = qubit_kernel();
  oracle::Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    Mat f(2, 2), g(2, 2);
    for (int i = 0; i < 4; ++i) {
      f(i / 2, i % 2) = rng.complex_normal();
      g(i / 2, i % 2) = rng.complex_normal();
    }
    const Mat a = spin_star(DiscreteSymbol{f}, DiscreteSymbol{g}, K).values;
    const Mat b = qubit_star_explicit(DiscreteSymbol{f}, DiscreteSymbol{g}).values;
    CHECK(max_abs(a - b) < 1e-12);
  }
}

TEST_CASE("grid Fourier pair is inverse") {
  oracle::Rng rng(13);
  for (int D = 1; D <= 7; ++D) {
    Mat f(D, D);
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) f(i, j) = rng.complex_normal();
    CHECK(max_abs(grid_idft(grid_dft(f)) - f) < 1e-12);
  }
}
