#pragma once

// Umbrella header.

#include "fuzzycal/benchgen.hpp"
#include "fuzzycal/corrector.hpp"
#include "fuzzycal/dataset.hpp"
#include "fuzzycal/errors.hpp"
#include "fuzzycal/io.hpp"
#include "fuzzycal/membership.hpp"
#include "fuzzycal/metrics.hpp"
#include "fuzzycal/solver.hpp"
#include "fuzzycal/version.hpp"
