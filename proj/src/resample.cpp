#include "gsfm/resample.hpp"

#include <cmath>
#include <numbers>

namespace gsfm {
namespace {

constexpr double kKaiserBeta = 8.0;

double sinc_pi(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

SincInterpolator::SincInterpolator() {
  const int half = kTaps / 2;
  table_.resize(static_cast<std::size_t>(half * kPhases + 2));
  const double i0b = std::cyl_bessel_i(0.0, kKaiserBeta);
  for (std::size_t i = 0; i < table_.size(); ++i) {
    const double d = static_cast<double>(i) / kPhases;
    const double r = d / half;
    const double win = r >= 1.0 ? 0.0 : std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - r * r)) / i0b;
    table_[i] = sinc_pi(d) * win;
  }
}

double SincInterpolator::kernel(double d) const {
  const double u = std::fabs(d) * kPhases;
  const auto i = static_cast<std::size_t>(u);
  if (i + 1 >= table_.size()) return 0.0;
  const double f = u - static_cast<double>(i);
  return table_[i] + f * (table_[i + 1] - table_[i]);
}

std::complex<double> SincInterpolator::operator()(std::span<const std::complex<double>> x,
                                                  double pos) const {
  const auto n = static_cast<long>(x.size());
  const double fl = std::floor(pos);
  const long i0 = static_cast<long>(fl);
  if (pos == fl) return (i0 >= 0 && i0 < n) ? x[static_cast<std::size_t>(i0)] : std::complex<double>{};
  const long lo = i0 - kTaps / 2 + 1, hi = i0 + kTaps / 2;
  if (hi < 0 || lo >= n) return {};
  std::complex<double> acc{};
  for (long k = std::max(lo, 0L); k <= std::min(hi, n - 1); ++k)
    acc += x[static_cast<std::size_t>(k)] * kernel(pos - static_cast<double>(k));
  return acc;
}

const SincInterpolator& sinc_interpolator() {
  static const SincInterpolator interp;
  return interp;
}

std::vector<std::complex<double>> interpolate_at(std::span<const std::complex<double>> x, double t0,
                                                 double fs, std::span<const double> t) {
  const auto& interp = sinc_interpolator();
  std::vector<std::complex<double>> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = interp(x, (t[i] - t0) * fs - 0.5);
  return out;
}

}  // namespace gsfm
