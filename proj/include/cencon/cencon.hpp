#pragma once

#include "cencon/bigint.hpp"
#include "cencon/bounds.hpp"
#include "cencon/cayley_menger.hpp"
#include "cencon/central_config.hpp"
#include "cencon/errors.hpp"
#include "cencon/geometry.hpp"
#include "cencon/json_io.hpp"
#include "cencon/numeric.hpp"
#include "cencon/pair_index.hpp"
#include "cencon/rng.hpp"
#include "cencon/solver.hpp"
#include "cencon/variety.hpp"
