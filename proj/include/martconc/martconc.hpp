#pragma once

/* Umbrella header: concentration bounds for martingales and weighted
 * families of martingales, scenario simulators with exactly known
 * conditional laws, brute-force verification oracles, and deterministic
 * report serialization. */

#include "core_scalar.hpp"
#include "individual_bounds.hpp"
#include "oracle.hpp"
#include "pac_bayes.hpp"
#include "parallel.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "simulation.hpp"
