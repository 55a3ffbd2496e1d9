#pragma once

#include "checkers/numeric.hpp"
#include "checkers/lattice.hpp"
#include "checkers/mass.hpp"
#include "checkers/amplitude.hpp"
#include "checkers/bypass.hpp"
#include "checkers/statistics.hpp"
#include "checkers/identities.hpp"
#include "checkers/io.hpp"
