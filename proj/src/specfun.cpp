#include "gsfm/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "gsfm/errors.hpp"
#include "gsfm/fft.hpp"
#include "quadrature.hpp"

namespace gsfm {
namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

FresnelPair fresnel(double x) {
  constexpr int kMaxIt = 200;
  constexpr double kEps = 1e-16;
  constexpr double kFpMin = 1e-300;
  constexpr double kXMin = 1.5;
  const double ax = std::fabs(x);
  FresnelPair r;
  if (ax < std::sqrt(kFpMin)) {
    r = {ax, 0.0};
  } else if (ax <= kXMin) {
    // Power series with alternating bookkeeping for the two sums.
    double sum = 0.0, sums = 0.0, sumc = ax, sign = 1.0;
    const double fact = 0.5 * kPi * ax * ax;
    bool odd = true;
    double term = ax;
    int n = 3;
    for (int k = 1; k <= kMaxIt; ++k) {
      term *= fact / k;
      sum += sign * term / n;
      const double test = std::fabs(sum) * kEps;
      if (odd) {
        sign = -sign;
        sums = sum;
        sum = sumc;
      } else {
        sumc = sum;
        sum = sums;
      }
      if (term < test) break;
      odd = !odd;
      n += 2;
    }
    r = {sumc, sums};
  } else {
    // Continued fraction for the complementary error function (modified Lentz).
    using cd = std::complex<double>;
    const double pix2 = kPi * ax * ax;
    cd b(1.0, -pix2);
    cd cc = 1.0 / kFpMin;
    cd d = 1.0 / b;
    cd h = d;
    int n = -1;
    for (int k = 2; k <= kMaxIt; ++k) {
      n += 2;
      const double a = -n * (n + 1.0);
      b += 4.0;
      d = 1.0 / (a * d + b);
      cc = b + a / cc;
      const cd del = cc * d;
      h *= del;
      if (std::fabs(del.real() - 1.0) + std::fabs(del.imag()) < kEps) break;
    }
    h *= cd(ax, -ax);
    const cd cs = cd(0.5, 0.5) * (1.0 - cd(std::cos(0.5 * pix2), std::sin(0.5 * pix2)) * h);
    r = {cs.real(), cs.imag()};
  }
  if (x < 0.0) {
    r.c = -r.c;
    r.s = -r.s;
  }
  return r;
}

FresnelPair gen_fresnel_moment(double x, double a) {
  require(std::isfinite(x) && x >= 0.0, "gen_fresnel: x must be finite and >= 0");
  require(std::isfinite(a) && a > 0.0, "gen_fresnel: a must be > 0");
  FresnelPair r;
  if (x == 0.0) return r;
  const auto& gl = detail::gauss_legendre20();

  // [0, min(x,1)]: substitute v = u^a so the u^(a-1) factor disappears,
  // then grade panels geometrically towards v = 0.
  const double x1 = std::min(x, 1.0);
  const double vmax = std::pow(x1, a);
  const double inv_a = 1.0 / a;
  double hi = vmax;
  for (int level = 0; level < 48; ++level) {
    const double lo = level == 47 ? 0.0 : 0.5 * hi;
    const double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo);
    double sc = 0.0, ss = 0.0;
    for (std::size_t k = 0; k < gl.size(); ++k) {
      const double v = mid + half * gl[k].x;
      const double u = std::pow(v, inv_a);
      sc += gl[k].w * std::cos(u);
      ss += gl[k].w * std::sin(u);
    }
    r.c += half * sc * inv_a;
    r.s += half * ss * inv_a;
    hi = lo;
  }

  // [1, x]: unit-width panels.
  if (x > 1.0) {
    const auto panels = static_cast<long>(std::ceil(x - 1.0));
    const double width = (x - 1.0) / static_cast<double>(panels);
    for (long p = 0; p < panels; ++p) {
      const double lo = 1.0 + p * width;
      const double mid = lo + 0.5 * width, half = 0.5 * width;
      double sc = 0.0, ss = 0.0;
      for (std::size_t k = 0; k < gl.size(); ++k) {
        const double u = mid + half * gl[k].x;
        const double wgt = gl[k].w * std::pow(u, a - 1.0);
        sc += wgt * std::cos(u);
        ss += wgt * std::sin(u);
      }
      r.c += half * sc;
      r.s += half * ss;
    }
  }
  return r;
}

FresnelPair gen_fresnel(double x, double a) {
  require(std::isfinite(a) && a > 0.0 && a <= 1.0, "gen_fresnel: a must lie in (0, 1]");
  return gen_fresnel_moment(x, a);
}

double bessel_j(int n, double x) {
  require(std::isfinite(x), "bessel_j: x must be finite");
  double sign = 1.0;
  if (n < 0) {
    n = -n;
    if (n % 2) sign = -sign;
  }
  if (x < 0.0) {
    x = -x;
    if (n % 2) sign = -sign;
  }
  return sign * std::cyl_bessel_j(static_cast<double>(n), x);
}

GbfArgs::GbfArgs(std::vector<double> a_, std::vector<double> b_)
    : a(std::move(a_)), b(std::move(b_)) {
  require(a.size() == b.size(), "GbfArgs: a and b must have equal length");
  for (std::size_t m = 0; m < a.size(); ++m)
    require(std::isfinite(a[m]) && std::isfinite(b[m]), "GbfArgs: arguments must be finite");
}

double GbfArgs::weight() const {
  double w = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) w += std::fabs(a[m]) + std::fabs(b[m]);
  return w;
}

GbfSeries::GbfSeries(const GbfArgs& args) {
  const std::size_t M = args.order();
  const double need = 8.0 * (static_cast<double>(M) + args.weight());
  const std::size_t L = fft::next_pow2(std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(need))));
  // Phase on θ_k = 2πk/L: Re Σ_m (-b_m - j a_m) e^{jmθ_k}.
  std::vector<std::complex<double>> buf(L);
  for (std::size_t m = 1; m <= M; ++m) buf[m % L] += std::complex<double>(-args.b[m - 1], -args.a[m - 1]);
  fft::backward(buf);
  for (auto& v : buf) {
    const double ph = v.real();
    v = {std::cos(ph), std::sin(ph)};
  }
  fft::forward(buf);
  const double inv = 1.0 / static_cast<double>(L);
  for (auto& v : buf) v *= inv;
  coeffs_ = std::move(buf);
  n_max_ = static_cast<int>(L / 2) - 1;
}

std::complex<double> GbfSeries::operator()(int n) const {
  require(std::abs(n) <= n_max_, "gbf_mixed: order exceeds the evaluation grid");
  const auto L = static_cast<long>(coeffs_.size());
  long idx = n >= 0 ? n : L + n;
  return coeffs_[static_cast<std::size_t>(idx)];
}

std::complex<double> gbf_mixed(int n, const GbfArgs& args) {
  return GbfSeries(args)(n);
}

}  // namespace gsfm
