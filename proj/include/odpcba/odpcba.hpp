#pragma once

// Umbrella header.

#include "odpcba/appraisal.hpp"
#include "odpcba/benefit_streams.hpp"
#include "odpcba/cost_model.hpp"
#include "odpcba/engine.hpp"
#include "odpcba/errors.hpp"
#include "odpcba/io/config.hpp"
#include "odpcba/io/csv.hpp"
#include "odpcba/io/fixtures.hpp"
#include "odpcba/io/report.hpp"
#include "odpcba/model.hpp"
#include "odpcba/money.hpp"
#include "odpcba/monte_carlo.hpp"
#include "odpcba/projections.hpp"
#include "odpcba/scenario.hpp"
