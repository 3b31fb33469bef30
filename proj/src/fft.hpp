#ifndef MOYALSPIN_FFT_HPP
#define MOYALSPIN_FFT_HPP

#include <complex>
#include <vector>

namespace moyalspin::detail {

// Unnormalized multidimensional DFT over a row-major complex array.
// sign = -1: sum exp(-2 pi i jk/N), sign = +1: sum exp(+2 pi i jk/N).
// execute() is safe to call concurrently from several threads.
class FftPlan {
 public:
  FftPlan(std::vector<int> dims, int sign);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::size_t size() const noexcept { return size_; }
  void execute(const std::complex<double>* in, std::complex<double>* out) const;
  void execute_inplace(std::complex<double>* data) const;

 private:
  void* plan_ = nullptr;
  std::size_t size_ = 1;
};

}  // namespace moyalspin::detail

#endif
