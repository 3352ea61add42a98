#pragma once

#include "backprojection.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "parallel.hpp"
#include "pipeline.hpp"
#include "radar.hpp"
#include "simulator.hpp"
#include "vec2.hpp"
#include "window.hpp"
