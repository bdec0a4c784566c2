#pragma once

// Umbrella header for the multifidelity benchmark harness.

#include "mfbench/core.hpp"
#include "mfbench/noise.hpp"
#include "mfbench/rotation.hpp"
#include "mfbench/spring_mass.hpp"
#include "mfbench/benchmarks.hpp"
#include "mfbench/sampling.hpp"
#include "mfbench/oracle.hpp"
#include "mfbench/metrics.hpp"
#include "mfbench/solvers.hpp"
#include "mfbench/history_io.hpp"
#include "mfbench/runner.hpp"
