#pragma once

#include "bounds.hpp"
#include "experiments.hpp"
#include "gf2.hpp"
#include "graph.hpp"
#include "paths.hpp"
#include "rng.hpp"
#include "subspace.hpp"
