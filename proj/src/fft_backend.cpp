// FFTW-backed complex-to-complex transforms with a process-wide plan cache.
//
// Plans are created with FFTW_ESTIMATE so planning is deterministic and
// instant; FFTW_UNALIGNED lets the same plan run on any caller buffer.
// Plan creation is serialized (FFTW planning is not thread-safe); execution
// via fftw_execute_dft on distinct buffers is.

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace fnohom::detail {

namespace {

struct PlanKey {
  std::vector<int> dims;
  bool forward;
  bool operator<(const PlanKey& o) const {
    if (forward != o.forward) return forward < o.forward;
    return dims < o.dims;
  }
};

class PlanCache {
 public:
  fftw_plan get(int rank, const int* dims, bool forward) {
    PlanKey key{std::vector<int>(dims, dims + rank), forward};
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::int64_t n = 1;
    for (int a = 0; a < rank; ++a) {
      if (dims[a] < 1) throw std::invalid_argument("fft: dims must be >= 1");
      n *= dims[a];
    }
    std::vector<std::complex<double>> scratch(static_cast<std::size_t>(n));
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan p = fftw_plan_dft(rank, key.dims.data(), buf, buf,
                                forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("fft: planning failed");
    plans_.emplace(std::move(key), p);
    return p;
  }

  ~PlanCache() {
    for (auto& [k, p] : plans_) fftw_destroy_plan(p);
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void fft_c2c(int rank, const int* dims, std::complex<double>* data,
             bool forward) {
  fftw_plan p = cache().get(rank, dims, forward);
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(p, buf, buf);
}

}  // namespace fnohom::detail
