#pragma once

#include "aptom/errors.hpp"
#include "aptom/params.hpp"
#include "aptom/config.hpp"
#include "aptom/sagnac.hpp"
#include "aptom/core_rates.hpp"
#include "aptom/steady_state.hpp"
#include "aptom/probe_response.hpp"
#include "aptom/sideband_oracle.hpp"
#include "aptom/observables.hpp"
#include "aptom/sweep.hpp"
#include "aptom/io.hpp"
#include "aptom/figures.hpp"
#include "aptom/check.hpp"
