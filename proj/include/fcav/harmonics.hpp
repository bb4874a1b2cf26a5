#pragma once

#include "fcav/polynomial.hpp"

namespace fcav {

// Real solid harmonic r^l Y_lm(theta, phi) as a Cartesian polynomial,
// homogeneous of degree l. Convention: real spherical harmonics,
// orthonormal on the unit sphere (int_{S^2} Y_lm Y_l'm' dS = delta),
// no Condon-Shortley phase; m > 0 pairs with cos(m phi), m < 0 with
// sin(|m| phi). So e.g. S_10 = sqrt(3/4pi) z, S_11 = sqrt(3/4pi) x,
// S_1,-1 = sqrt(3/4pi) y.
Poly3 real_solid_harmonic(int l, int m);

} // namespace fcav
