#include "fft.hpp"

#include <fftw3.h>

#include <memory>
#include <mutex>

namespace ngd::detail {

namespace {

// The FFTW planner is not reentrant; execution is.
std::mutex planner_mutex;

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const noexcept {
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(p);
  }
};

}  // namespace

void fft_inplace(std::vector<std::complex<double>>& data, bool inverse) {
  if (data.empty()) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  // FFTW_ESTIMATE leaves the buffer untouched during planning.
  std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
  {
    std::lock_guard lock(planner_mutex);
    plan.reset(fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                FFTW_ESTIMATE));
  }
  fftw_execute(plan.get());
}

}  // namespace ngd::detail
