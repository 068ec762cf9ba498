#pragma once

#include "holonomy/analytic2x2.hpp"
#include "holonomy/curve.hpp"
#include "holonomy/error.hpp"
#include "holonomy/evolve.hpp"
#include "holonomy/family.hpp"
#include "holonomy/linalg.hpp"
#include "holonomy/parallel.hpp"
#include "holonomy/permutation.hpp"
#include "holonomy/phase.hpp"
#include "holonomy/tracking.hpp"
#include "holonomy/types.hpp"
