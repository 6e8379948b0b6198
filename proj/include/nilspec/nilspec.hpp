#pragma once

#include "nilspec/boundary.hpp"
#include "nilspec/charpoly.hpp"
#include "nilspec/equiv.hpp"
#include "nilspec/error.hpp"
#include "nilspec/family.hpp"
#include "nilspec/isospec.hpp"
#include "nilspec/json_io.hpp"
#include "nilspec/lattice.hpp"
#include "nilspec/linalg.hpp"
#include "nilspec/matrix.hpp"
#include "nilspec/nilalg.hpp"
#include "nilspec/tolerances.hpp"
