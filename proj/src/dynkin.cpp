// SPDX-License-Identifier: Apache-2.0

#include "exitlab/dynkin.hpp"

#include <cmath>
#include <vector>

#include "exitlab/errors.hpp"

namespace exitlab {

double dynkin_mean_exit_symmetric(double lambda, double radius, double eps, int panels) {
  if (!(radius > 0.0) || !(eps > 0.0) || !(lambda >= 0.0)) {
    throw ConfigError("dynkin: need radius > 0, eps > 0, lambda >= 0");
  }
  if (panels < 8) {
    throw ConfigError("dynkin: need at least 8 panels");
  }

  const double inv_eps2 = 1.0 / (eps * eps);
  const double h = radius / static_cast<double>(panels);

  // Cumulative inner integral I(y) = Int_0^y exp(-lambda s^2/eps^2) ds.
  std::vector<double> inner(static_cast<std::size_t>(panels) + 1);
  inner[0] = 0.0;
  double f_prev = 1.0;  // exp(0)
  for (int i = 1; i <= panels; ++i) {
    const double s = static_cast<double>(i) * h;
    const double f = std::exp(-lambda * s * s * inv_eps2);
    inner[static_cast<std::size_t>(i)] =
        inner[static_cast<std::size_t>(i - 1)] + 0.5 * h * (f_prev + f);
    f_prev = f;
  }

  // Outer integral of g(y) = exp(+lambda y^2/eps^2) * I(y); g(0) = 0.
  double outer = 0.0;
  double g_prev = 0.0;
  for (int i = 1; i <= panels; ++i) {
    const double y = static_cast<double>(i) * h;
    const double g = std::exp(lambda * y * y * inv_eps2) * inner[static_cast<std::size_t>(i)];
    if (!std::isfinite(g)) {
      throw NumericalError("dynkin: integrand overflow (lambda r^2/eps^2 too large)");
    }
    outer += 0.5 * h * (g_prev + g);
    g_prev = g;
  }

  return 2.0 * inv_eps2 * outer;
}

}  // namespace exitlab
