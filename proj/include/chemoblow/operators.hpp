#pragma once

#include "chemoblow/grid.hpp"

namespace chemoblow {

// Discrete radial operators in conservative flux form with homogeneous
// Neumann boundaries. Every operator assembles face fluxes and divides
// the telescoping difference by the exact cell volume, so the weighted
// sum over the ball vanishes to round-off for any field.

// (1/r^{n-1}) d_r (r^{n-1} d_r f) with zero flux at r = 0 and r = R.
RadialField laplacian(const RadialField& f, const RadialGrid& g);

// div(u grad s) with donor-cell upwinding: face velocity q = d_r s, face
// density from the cell the velocity leaves. First order, positivity
// preserving under the CFL bound returned by the dynamics module.
RadialField chemo_div(const RadialField& u, const RadialField& s, const RadialGrid& g);

// Centered face differences, zero at the two boundary faces.
FaceField radial_gradient(const RadialField& f, const RadialGrid& g);

// Quadrature for face-valued integrands: sum_j a_j h v_j over interior
// faces (the boundary faces carry zero gradient data).
double face_quadrature(const FaceField& v, const RadialGrid& g);

// Solves (I - dt Lap + dt decay I) x = rhs by the Thomas algorithm with
// one pass of iterative refinement. The matrix is an irreducibly
// diagonally dominant M-matrix for dt > 0, decay >= 0.
RadialField implicit_helmholtz_solve(const RadialField& rhs, double dt, double decay, const RadialGrid& g);

} // namespace chemoblow
