#pragma once

#include "qrapnc/battery.hpp"
#include "qrapnc/bench.hpp"
#include "qrapnc/depq.hpp"
#include "qrapnc/errors.hpp"
#include "qrapnc/fast_solver.hpp"
#include "qrapnc/instance.hpp"
#include "qrapnc/io.hpp"
#include "qrapnc/qrap.hpp"
#include "qrapnc/reference_solvers.hpp"
#include "qrapnc/solution.hpp"
#include "qrapnc/verify.hpp"
