#pragma once

#include "tsnsim/clock.hpp"
#include "tsnsim/engine.hpp"
#include "tsnsim/error.hpp"
#include "tsnsim/event_queue.hpp"
#include "tsnsim/faults.hpp"
#include "tsnsim/fiveg.hpp"
#include "tsnsim/fiveg_config.hpp"
#include "tsnsim/gptp.hpp"
#include "tsnsim/hot_standby.hpp"
#include "tsnsim/ids.hpp"
#include "tsnsim/metrics.hpp"
#include "tsnsim/report.hpp"
#include "tsnsim/rng.hpp"
#include "tsnsim/scenario.hpp"
#include "tsnsim/time.hpp"
#include "tsnsim/topology.hpp"
#include "tsnsim/trace.hpp"
