#pragma once

// Integer least squares: nearest-lattice-point solvers over an SPD quadratic
// form, with LLL-type preconditioning and Schnorr-Euchner style discrete
// search.

#include "ils/errors.hpp"
#include "ils/factorization.hpp"
#include "ils/generator.hpp"
#include "ils/io.hpp"
#include "ils/lll.hpp"
#include "ils/matrix.hpp"
#include "ils/numeric.hpp"
#include "ils/oracle.hpp"
#include "ils/search.hpp"
#include "ils/unimodular.hpp"
