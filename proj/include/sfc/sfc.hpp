#pragma once

// Stochastic fuzzy controller simulation: discrete-PDF membership model and
// exact inference engine, LFSR generator chain, cycle-accurate coincidence
// datapath, and the statistical verification layer on top.

#include "sfc/analysis.hpp"
#include "sfc/channel.hpp"
#include "sfc/config.hpp"
#include "sfc/controller.hpp"
#include "sfc/csv.hpp"
#include "sfc/errors.hpp"
#include "sfc/generator.hpp"
#include "sfc/lfsr.hpp"
#include "sfc/membership.hpp"
#include "sfc/rulebase.hpp"
#include "sfc/stats.hpp"
#include "sfc/universe.hpp"
