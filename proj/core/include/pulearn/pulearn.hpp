#pragma once

// Umbrella header.

#include "pulearn/config.hpp"
#include "pulearn/datamodel.hpp"
#include "pulearn/errors.hpp"
#include "pulearn/estimators.hpp"
#include "pulearn/experiment.hpp"
#include "pulearn/ingest.hpp"
#include "pulearn/logistic.hpp"
#include "pulearn/metrics.hpp"
#include "pulearn/numkit.hpp"
#include "pulearn/synth.hpp"
