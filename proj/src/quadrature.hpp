#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace gsfm::detail {

struct GlNode {
  double x;
  double w;
};

// n-point Gauss-Legendre rule on [-1, 1].
template <int n>
const std::array<GlNode, n>& gauss_legendre() {
  static const std::array<GlNode, n> nodes = [] {
    std::array<GlNode, n> out{};
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-16) break;
      }
      out[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
    }
    return out;
  }();
  return nodes;
}

inline const std::array<GlNode, 20>& gauss_legendre20() { return gauss_legendre<20>(); }

}  // namespace gsfm::detail
