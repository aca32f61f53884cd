#pragma once

#include "errors.hpp"
#include "polynomial.hpp"
#include "special_functions.hpp"
#include "potential.hpp"
#include "quadrature.hpp"
#include "shift_operator.hpp"
#include "exact_spectra.hpp"
#include "grid_solver.hpp"
#include "orthogonality.hpp"
