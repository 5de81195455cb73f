#pragma once

// Umbrella header for the gap-filling library: well I/O, preprocessing,
// feature generation, the imputation models and the benchmark harness.
// serialize.hpp (JSON persistence) is intentionally not pulled in here.

#include "loggap/benchmark.hpp"
#include "loggap/csv.hpp"
#include "loggap/errors.hpp"
#include "loggap/features.hpp"
#include "loggap/fourier.hpp"
#include "loggap/impute.hpp"
#include "loggap/interpolate.hpp"
#include "loggap/las.hpp"
#include "loggap/matrix.hpp"
#include "loggap/metrics.hpp"
#include "loggap/mlp.hpp"
#include "loggap/preprocess.hpp"
#include "loggap/rng.hpp"
#include "loggap/synthetic.hpp"
#include "loggap/well.hpp"
