#pragma once

#include "error.hpp"
#include "instance.hpp"
#include "solution.hpp"
#include "validate.hpp"
#include "json_io.hpp"
#include "eligibility.hpp"
#include "milp.hpp"
#include "mps.hpp"
#include "exact.hpp"
#include "moves.hpp"
#include "heuristic.hpp"
#include "rng.hpp"
#include "generator.hpp"
#include "harness.hpp"
#include "plots.hpp"
