#pragma once

// Umbrella header: the whole public API in one include.

#include "rcurc/alloc_stats.hpp"
#include "rcurc/dense_matrix.hpp"
#include "rcurc/errors.hpp"
#include "rcurc/io.hpp"
#include "rcurc/linalg.hpp"
#include "rcurc/metrics.hpp"
#include "rcurc/model.hpp"
#include "rcurc/rng.hpp"
#include "rcurc/sampling.hpp"
#include "rcurc/solver.hpp"
