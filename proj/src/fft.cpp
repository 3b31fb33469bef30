#include "fft.hpp"

#include <moyalspin/error.hpp>

#include <fftw3.h>

#include <mutex>

namespace moyalspin::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FftPlan::FftPlan(std::vector<int> dims, int sign) {
  if (dims.empty()) fail(ErrorCode::InvalidArgument, "FFT needs at least one axis");
  for (int n : dims) {
    if (n < 1) fail(ErrorCode::InvalidArgument, "FFT axis length must be positive");
    size_ *= static_cast<std::size_t>(n);
  }
  std::vector<std::complex<double>> a(size_), b(size_);
  std::lock_guard lock(planner_mutex());
  plan_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(),
                        reinterpret_cast<fftw_complex*>(a.data()),
                        reinterpret_cast<fftw_complex*>(b.data()),
                        sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                        FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plan_ == nullptr) fail(ErrorCode::InvalidArgument, "FFTW could not create a plan");
}

FftPlan::~FftPlan() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void FftPlan::execute(const std::complex<double>* in, std::complex<double>* out) const {
  // FFTW does not write to the input of an out-of-place complex transform.
  fftw_execute_dft(static_cast<fftw_plan>(plan_),
                   reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void FftPlan::execute_inplace(std::complex<double>* data) const {
  std::vector<std::complex<double>> tmp(data, data + size_);
  execute(tmp.data(), data);
}

}  // namespace moyalspin::detail
