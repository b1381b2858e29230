#pragma once

#include <complex>
#include <vector>

namespace gsfm {

struct FresnelPair {
  double c = 0.0;
  double s = 0.0;
};

// Standard Fresnel integrals C(x) = ∫0^x cos(πu²/2) du, S(x) = ∫0^x sin(πu²/2) du.
FresnelPair fresnel(double x);

// Generalized Fresnel integrals C{x,a} = ∫0^x u^(a-1) cos u du and
// S{x,a} = ∫0^x u^(a-1) sin u du for x >= 0 and 0 < a <= 1.
FresnelPair gen_fresnel(double x, double a);

// Same integrals for any a > 0.
FresnelPair gen_fresnel_moment(double x, double a);

// Integer-order Bessel function of the first kind, any real x.
double bessel_j(int n, double x);

// Arguments of the mixed-type generalized Bessel function
//   exp(j Σ_m [a_m sin(mθ) - b_m cos(mθ)]) = Σ_n J_n{a; b} exp(jnθ).
struct GbfArgs {
  std::vector<double> a;
  std::vector<double> b;

  GbfArgs() = default;
  GbfArgs(std::vector<double> a_, std::vector<double> b_);
  std::size_t order() const { return a.size(); }
  double weight() const;  // Σ |a_m| + |b_m|
};

// All orders of the GBF up to ±n_max, computed from one FFT.
class GbfSeries {
 public:
  explicit GbfSeries(const GbfArgs& args);

  std::complex<double> operator()(int n) const;
  int n_max() const { return n_max_; }
  std::size_t grid_length() const { return coeffs_.size(); }

 private:
  std::vector<std::complex<double>> coeffs_;
  int n_max_ = 0;
};

std::complex<double> gbf_mixed(int n, const GbfArgs& args);

}  // namespace gsfm
