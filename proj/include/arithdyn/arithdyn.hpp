#ifndef ARITHDYN_ARITHDYN_HPP
#define ARITHDYN_ARITHDYN_HPP

#include "analytic_kernel.hpp"
#include "complex_torsion.hpp"
#include "cramer.hpp"
#include "error.hpp"
#include "explicit_formula.hpp"
#include "integer_matrix.hpp"
#include "io.hpp"
#include "numeric.hpp"
#include "primes.hpp"
#include "quadratic_fields.hpp"
#include "regdet.hpp"
#include "suspension.hpp"
#include "zeta_zeros.hpp"

#endif
