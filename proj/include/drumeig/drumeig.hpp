#pragma once

// Umbrella header: Dirichlet Laplacian eigenfrequencies of smooth planar
// domains by Fredholm determinants of Nystrom-discretized boundary integral
// operators, with combined-field robustness, an SVD fallback for close
// eigenvalues, and Green's-formula eigenmode reconstruction.

#include "errors.hpp"
#include "geometry.hpp"
#include "linalg.hpp"
#include "modes.hpp"
#include "nystrom.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "rootfind.hpp"
#include "shapes_io.hpp"
#include "solver.hpp"
#include "specfun.hpp"
