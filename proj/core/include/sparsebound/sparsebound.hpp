#pragma once

#include "sparsebound/bounds.hpp"
#include "sparsebound/error.hpp"
#include "sparsebound/experiments.hpp"
#include "sparsebound/graphs.hpp"
#include "sparsebound/io.hpp"
#include "sparsebound/matrix.hpp"
#include "sparsebound/norms.hpp"
#include "sparsebound/parallel.hpp"
#include "sparsebound/random.hpp"
#include "sparsebound/schemes.hpp"
#include "sparsebound/stats.hpp"
