#pragma once

#include "subfrac/bases.hpp"
#include "subfrac/errors.hpp"
#include "subfrac/fractional_calculus.hpp"
#include "subfrac/solver.hpp"
#include "subfrac/special_functions.hpp"
#include "subfrac/spectral_core.hpp"
#include "subfrac/version.hpp"
