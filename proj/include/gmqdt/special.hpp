#pragma once

#include <complex>

namespace gmqdt::special {

// Principal branch of log Gamma(z), continuous off the negative real axis
// (matches the usual loggamma convention, e.g. Im lnGamma(-1/2) = -pi).
// Throws PoleError at non-positive integers.
std::complex<double> log_gamma(std::complex<double> z);

}  // namespace gmqdt::special
