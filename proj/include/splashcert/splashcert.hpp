#pragma once

#include "splashcert/config.hpp"
#include "splashcert/errors.hpp"
#include "splashcert/evolution.hpp"
#include "splashcert/finite_difference.hpp"
#include "splashcert/geometry.hpp"
#include "splashcert/interpolation.hpp"
#include "splashcert/io.hpp"
#include "splashcert/kernels.hpp"
#include "splashcert/quadrature.hpp"
#include "splashcert/scenario.hpp"
#include "splashcert/simulation.hpp"
#include "splashcert/splash_monitor.hpp"
#include "splashcert/vec2.hpp"
#include "splashcert/version.hpp"
