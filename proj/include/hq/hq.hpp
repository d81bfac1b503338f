#pragma once

#include "hq/rational.hpp"
#include "hq/matrix.hpp"
#include "hq/linalg.hpp"
#include "hq/type_combinatorics.hpp"
#include "hq/quiver.hpp"
#include "hq/higgs_bridge.hpp"
#include "hq/polynomial.hpp"
#include "hq/factor.hpp"
#include "hq/hitchin_spectral.hpp"
#include "hq/ds_solver.hpp"
#include "hq/poisson.hpp"
#include "hq/json_io.hpp"
