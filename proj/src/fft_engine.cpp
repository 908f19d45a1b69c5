#include "fft_engine.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace boussinesq::detail {

namespace {

// Plans are created with FFTW_UNALIGNED so they can be executed on any
// buffer through the new-array interface, which is thread-safe.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int dimension, int points, FftDirection direction) {
    const auto key = std::make_tuple(dimension, points, direction == FftDirection::kForward);
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<int> dims(static_cast<std::size_t>(dimension), points);
    std::size_t total = 1;
    for (int d : dims) total *= static_cast<std::size_t>(d);
    auto* scratch = fftw_alloc_complex(total);
    fftw_plan plan = fftw_plan_dft(dimension, dims.data(), scratch, scratch,
                                   direction == FftDirection::kForward ? FFTW_FORWARD : FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, bool>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void fft_inplace(const GridSpec& grid, Complex* data, FftDirection direction) {
  fftw_plan plan = cache().get(grid.dimension(), grid.points(), direction);
  auto* buffer = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, buffer, buffer);
}

}  // namespace boussinesq::detail
