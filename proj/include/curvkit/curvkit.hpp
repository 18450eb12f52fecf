#pragma once

#include "curvkit/audit.hpp"
#include "curvkit/curvature.hpp"
#include "curvkit/error.hpp"
#include "curvkit/graph.hpp"
#include "curvkit/io.hpp"
#include "curvkit/mpnn.hpp"
#include "curvkit/rewiring.hpp"
#include "curvkit/stats.hpp"
