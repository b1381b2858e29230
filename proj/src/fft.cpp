#include "gsfm/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace gsfm::fft {
namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    auto* buf = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void run(std::span<cd> data, int sign) {
  if (data.size() < 2) return;
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(cache().get(data.size(), sign), p, p);
}

}  // namespace

void forward(std::span<cd> data) { run(data, FFTW_FORWARD); }

void backward(std::span<cd> data) { run(data, FFTW_BACKWARD); }

void inverse(std::span<cd> data) {
  run(data, FFTW_BACKWARD);
  const double s = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= s;
}

std::size_t fast_length(std::size_t n) {
  if (n <= 1) return 1;
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2u, 3u, 5u, 7u})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

std::vector<cd> xcorr(std::span<const cd> a, std::span<const cd> b) {
  const std::size_t na = a.size(), nb = b.size();
  if (na == 0 || nb == 0) return {};
  const std::size_t nout = na + nb - 1;
  const std::size_t L = fast_length(nout);
  std::vector<cd> fa(L), fb(L);
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  forward(fa);
  forward(fb);
  // d[l] = Σ conj(a_i) b_{i+l} (circular); c[k] = conj(d[k]).
  for (std::size_t k = 0; k < L; ++k) fb[k] *= std::conj(fa[k]);
  inverse(fb);
  std::vector<cd> out(nout);
  for (std::size_t idx = 0; idx < nout; ++idx) {
    long k = static_cast<long>(idx) - static_cast<long>(na - 1);
    std::size_t pos = k >= 0 ? static_cast<std::size_t>(k) : L - static_cast<std::size_t>(-k);
    out[idx] = std::conj(fb[pos]);
  }
  return out;
}

}  // namespace gsfm::fft
