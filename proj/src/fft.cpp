#include "chronofrft/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>

namespace chronofrft::fft {
namespace {

struct Plan {
  fftw_complex* buffer = nullptr;
  fftw_plan plan = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, p] : plans_) {
      fftw_destroy_plan(p.plan);
      fftw_free(p.buffer);
    }
  }

  void run(std::span<std::complex<double>> data, Direction dir) {
    std::lock_guard<std::mutex> lock(mutex_);
    const int n = static_cast<int>(data.size());
    auto key = std::make_pair(n, dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD);
    auto it = plans_.find(key);
    if (it == plans_.end()) {
      Plan p;
      p.buffer = fftw_alloc_complex(static_cast<std::size_t>(n));
      p.plan = fftw_plan_dft_1d(n, p.buffer, p.buffer, key.second, FFTW_ESTIMATE);
      it = plans_.emplace(key, p).first;
    }
    auto* buf = reinterpret_cast<std::complex<double>*>(it->second.buffer);
    std::copy(data.begin(), data.end(), buf);
    fftw_execute(it->second.plan);
    std::copy(buf, buf + n, data.begin());
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, Plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void transform(std::span<std::complex<double>> data, Direction dir) {
  if (data.size() < 2) return;
  cache().run(data, dir);
}

}  // namespace chronofrft::fft
