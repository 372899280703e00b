#pragma once

#include "evolve/core.hpp"
#include "evolve/domain.hpp"
#include "evolve/fields.hpp"
#include "evolve/geometry.hpp"
#include "evolve/quadrature.hpp"
#include "evolve/scenarios.hpp"
#include "evolve/spacetime.hpp"
#include "evolve/transport.hpp"
#include "evolve/validate.hpp"
#include "evolve/suite.hpp"
