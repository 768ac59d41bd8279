#include "convolve.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>

namespace retinexad::detail {
namespace {

// Kernels up to this many taps are applied directly.
constexpr std::size_t kDirectTaps = 65;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Smallest 2^a 3^b 5^c >= n, sizes FFTW handles with its fast codelets.
int fft_size(int n) {
  for (int m = n;; ++m) {
    int k = m;
    for (int f : {2, 3, 5}) {
      while (k % f == 0) k /= f;
    }
    if (k == 1) return m;
  }
}

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

// Forward and inverse real transforms of one size with their own aligned
// buffers. One instance per thread and size; execution reuses the buffers.
class RealFft {
 public:
  explicit RealFft(int n)
      : n_(n),
        real_(static_cast<double*>(fftw_malloc(sizeof(double) * static_cast<std::size_t>(n)))),
        spec_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(n / 2 + 1)))) {
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_r2c_1d(n, real_.get(), spec_.get(), FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_1d(n, spec_.get(), real_.get(), FFTW_ESTIMATE);
  }
  ~RealFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const { return n_; }
  double* real() { return real_.get(); }
  fftw_complex* spectrum() { return spec_.get(); }
  void forward() { fftw_execute(forward_); }
  void inverse() { fftw_execute(inverse_); }

 private:
  int n_;
  std::unique_ptr<double, FftwDeleter> real_;
  std::unique_ptr<fftw_complex, FftwDeleter> spec_;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

RealFft& fft_for(int n) {
  thread_local std::map<int, std::unique_ptr<RealFft>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<RealFft>(n);
  return *slot;
}

Plane convolve_rows_direct(const Plane& p, const std::vector<double>& kernel) {
  const int w = p.width();
  const int r = static_cast<int>(kernel.size() / 2);
  Plane out(w, p.height());
  std::vector<double> padded(static_cast<std::size_t>(w + 2 * r));
  for (int y = 0; y < p.height(); ++y) {
    auto src = p.row(y);
    for (int j = 0; j < w + 2 * r; ++j) padded[j] = src[std::clamp(j - r, 0, w - 1)];
    auto dst = out.row(y);
    // Tap-outer order keeps a fixed summation order per pixel and vectorizes.
    for (std::size_t k = 0; k < kernel.size(); ++k) {
      const double wk = kernel[k];
      const double* in = padded.data() + k;
      for (int x = 0; x < w; ++x) dst[x] += wk * in[x];
    }
  }
  return out;
}

Plane convolve_rows_fft(const Plane& p, const std::vector<double>& kernel) {
  const int w = p.width();
  const int r = static_cast<int>(kernel.size() / 2);
  const int n = fft_size(w + 2 * r);
  RealFft& fft = fft_for(n);
  const int nspec = n / 2 + 1;

  // Kernel centred at index 0 with negative offsets wrapped to the end.
  double* buf = fft.real();
  std::fill(buf, buf + n, 0.0);
  for (int j = -r; j <= r; ++j) buf[(j + n) % n] = kernel[static_cast<std::size_t>(j + r)];
  fft.forward();
  const auto* kfirst = reinterpret_cast<const std::complex<double>*>(fft.spectrum());
  const std::vector<std::complex<double>> kspec(kfirst, kfirst + nspec);

  const double scale = 1.0 / n;
  Plane out(w, p.height());
  for (int y = 0; y < p.height(); ++y) {
    auto src = p.row(y);
    for (int j = 0; j < n; ++j) buf[j] = j < w + 2 * r ? src[std::clamp(j - r, 0, w - 1)] : 0.0;
    fft.forward();
    auto* spec = reinterpret_cast<std::complex<double>*>(fft.spectrum());
    for (int k = 0; k < nspec; ++k) spec[k] *= kspec[static_cast<std::size_t>(k)];
    fft.inverse();
    auto dst = out.row(y);
    for (int x = 0; x < w; ++x) dst[x] = buf[x + r] * scale;
  }
  return out;
}

}  // namespace

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) return {1.0};
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * r + 1));
  double sum = 0.0;
  for (int j = -r; j <= r; ++j) {
    const double v = std::exp(-0.5 * (j * j) / (sigma * sigma));
    k[static_cast<std::size_t>(j + r)] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

Plane convolve_rows(const Plane& p, const std::vector<double>& kernel) {
  if (kernel.size() == 1) {
    Plane out = p;
    for (double& v : out.values()) v *= kernel[0];
    return out;
  }
  return kernel.size() <= kDirectTaps ? convolve_rows_direct(p, kernel) : convolve_rows_fft(p, kernel);
}

}  // namespace retinexad::detail
