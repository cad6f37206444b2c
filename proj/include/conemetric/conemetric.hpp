#pragma once

#include "conemetric/cone.hpp"
#include "conemetric/contraction.hpp"
#include "conemetric/equiv.hpp"
#include "conemetric/fixedpoint.hpp"
#include "conemetric/json_io.hpp"
#include "conemetric/norm.hpp"
#include "conemetric/phi.hpp"
#include "conemetric/rng.hpp"
#include "conemetric/space.hpp"
#include "conemetric/suite.hpp"
#include "conemetric/types.hpp"
