#pragma once

// Finite-dimensional Hilbert C*-module toolkit: direct-sum matrix algebras,
// the standard module A^k, three orthogonality relations with their norm
// characterizations and state witnesses, multi-A-linear form factorization
// F = cE, and theorem-by-theorem verification suites.

#include "hcm/algebra.hpp"
#include "hcm/config.hpp"
#include "hcm/forms.hpp"
#include "hcm/json_io.hpp"
#include "hcm/module.hpp"
#include "hcm/optimize.hpp"
#include "hcm/orthogonality.hpp"
#include "hcm/random.hpp"
#include "hcm/report.hpp"
#include "hcm/suites.hpp"
