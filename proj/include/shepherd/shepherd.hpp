#pragma once

// Umbrella header for the shepherding simulator and its DE path planner.

#include "shepherd/behaviors.hpp"
#include "shepherd/de.hpp"
#include "shepherd/harness.hpp"
#include "shepherd/path.hpp"
#include "shepherd/planner.hpp"
#include "shepherd/rng.hpp"
#include "shepherd/scenario.hpp"
#include "shepherd/spline.hpp"
#include "shepherd/vec2.hpp"
#include "shepherd/world.hpp"
