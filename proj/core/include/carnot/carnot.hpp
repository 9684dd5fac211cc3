#pragma once

#include "carnot/bounds.hpp"
#include "carnot/coherence.hpp"
#include "carnot/decomposition.hpp"
#include "carnot/dynamics.hpp"
#include "carnot/engine.hpp"
#include "carnot/errors.hpp"
#include "carnot/reservoir.hpp"
#include "carnot/summation.hpp"
