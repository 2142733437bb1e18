#pragma once

#include "rcsub/error.hpp"
#include "rcsub/grid.hpp"
#include "rcsub/functions.hpp"
#include "rcsub/subdivision.hpp"
#include "rcsub/jumps.hpp"
#include "rcsub/detect.hpp"
#include "rcsub/rc.hpp"
#include "rcsub/analysis.hpp"
#include "rcsub/tensor2d.hpp"
#include "rcsub/io.hpp"
#include "rcsub/tables.hpp"
#include "rcsub/figures.hpp"
