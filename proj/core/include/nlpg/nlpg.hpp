#pragma once

// Convenience header pulling in the whole public API.

#include "nlpg/advection.hpp"
#include "nlpg/continuation.hpp"
#include "nlpg/diagnostics.hpp"
#include "nlpg/errors.hpp"
#include "nlpg/fe_space.hpp"
#include "nlpg/graded.hpp"
#include "nlpg/laplace.hpp"
#include "nlpg/lp_geometry.hpp"
#include "nlpg/mesh.hpp"
#include "nlpg/mixed_problem.hpp"
#include "nlpg/norms.hpp"
#include "nlpg/quadrature.hpp"
#include "nlpg/smoothed_lp.hpp"
#include "nlpg/solver.hpp"
