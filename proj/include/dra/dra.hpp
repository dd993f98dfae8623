#pragma once

// Umbrella header for the whole library.

#include "dra/analysis.hpp"
#include "dra/arrivals.hpp"
#include "dra/channel.hpp"
#include "dra/classify.hpp"
#include "dra/config.hpp"
#include "dra/csv.hpp"
#include "dra/fluid.hpp"
#include "dra/hfunctions.hpp"
#include "dra/model.hpp"
#include "dra/numerics.hpp"
#include "dra/ode.hpp"
#include "dra/protocol.hpp"
#include "dra/report_json.hpp"
#include "dra/rng.hpp"
#include "dra/roots.hpp"
#include "dra/sampling.hpp"
#include "dra/sweep.hpp"
#include "dra/trace.hpp"
