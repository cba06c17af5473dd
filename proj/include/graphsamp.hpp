#pragma once

#include "graphsamp/analysis.hpp"
#include "graphsamp/config.hpp"
#include "graphsamp/error.hpp"
#include "graphsamp/graph.hpp"
#include "graphsamp/harness.hpp"
#include "graphsamp/io.hpp"
#include "graphsamp/parallel.hpp"
#include "graphsamp/recovery.hpp"
#include "graphsamp/report.hpp"
#include "graphsamp/rng.hpp"
#include "graphsamp/sampling.hpp"
#include "graphsamp/signal.hpp"
#include "graphsamp/spectral.hpp"
