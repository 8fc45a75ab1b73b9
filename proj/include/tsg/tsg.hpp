#pragma once

#include "tsg/eigensolver.hpp"
#include "tsg/error.hpp"
#include "tsg/geometry.hpp"
#include "tsg/guidance.hpp"
#include "tsg/linearization.hpp"
#include "tsg/matrix.hpp"
#include "tsg/presets.hpp"
#include "tsg/relative_dynamics.hpp"
#include "tsg/scenario_io.hpp"
#include "tsg/sim.hpp"
#include "tsg/spectrum.hpp"
#include "tsg/steady_state.hpp"
#include "tsg/version.hpp"
