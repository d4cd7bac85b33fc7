// SPDX-License-Identifier: Apache-2.0
// Independent mean-exit-time oracle for the 1D linear-drift diffusion.
#pragma once

namespace exitlab {

//! Mean first-exit time from (-radius, radius), started at the center, of
//!   dX = -lambda X dt + eps dW,  lambda >= 0, eps > 0.
//! Solves the boundary-value problem (eps^2/2) u'' - lambda x u' = -1 with
//! u(+-radius) = 0 in closed integral form,
//!   u(0) = (2/eps^2) Int_0^r exp(lambda y^2/eps^2)
//!                     Int_0^y exp(-lambda s^2/eps^2) ds dy,
//! by cumulative trapezoid quadrature on `panels` uniform panels (O(h^2)).
//! For lambda = 0 this reduces exactly to r^2/eps^2.
double dynkin_mean_exit_symmetric(double lambda, double radius, double eps,
                                  int panels = 1 << 16);

}  // namespace exitlab
