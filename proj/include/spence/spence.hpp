#pragma once

#include "spence/backend.hpp"
#include "spence/cnf.hpp"
#include "spence/dimacs.hpp"
#include "spence/error.hpp"
#include "spence/experiment.hpp"
#include "spence/external.hpp"
#include "spence/generator.hpp"
#include "spence/mu.hpp"
#include "spence/random.hpp"
#include "spence/solver.hpp"
