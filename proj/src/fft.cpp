#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "monogenic/error.hpp"

namespace monogenic::detail {

namespace {

// The FFTW planner is not reentrant; plan execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Plan {
 public:
  Plan(std::span<Complex> data, std::span<const int> dims, int sign) {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf, sign,
                          FFTW_ESTIMATE);
    if (plan_ == nullptr) throw Error(ErrorCode::InvalidArgument, "FFTW planning failed");
  }
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  void execute() { fftw_execute(plan_); }

 private:
  fftw_plan plan_ = nullptr;
};

std::size_t total_size(std::span<const int> dims) {
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  return n;
}

void check(std::span<Complex> data, std::span<const int> dims) {
  if (dims.empty() || total_size(dims) != data.size()) {
    throw Error(ErrorCode::InvalidArgument, "FFT buffer does not match dimensions");
  }
}

}  // namespace

void fft_forward(std::span<Complex> data, std::span<const int> dims) {
  check(data, dims);
  Plan(data, dims, FFTW_FORWARD).execute();
}

void fft_inverse(std::span<Complex> data, std::span<const int> dims) {
  check(data, dims);
  Plan(data, dims, FFTW_BACKWARD).execute();
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& c : data) c *= scale;
}

}  // namespace monogenic::detail
