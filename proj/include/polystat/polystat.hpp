#pragma once

// Umbrella header.

#include "polystat/errors.hpp"
#include "polystat/flow.hpp"
#include "polystat/generators.hpp"
#include "polystat/geometry.hpp"
#include "polystat/io.hpp"
#include "polystat/perturbations.hpp"
#include "polystat/variations.hpp"
