#pragma once

#include "rankmetrics/activity.hpp"
#include "rankmetrics/analysis.hpp"
#include "rankmetrics/baseline.hpp"
#include "rankmetrics/config.hpp"
#include "rankmetrics/corpus.hpp"
#include "rankmetrics/delimited.hpp"
#include "rankmetrics/error.hpp"
#include "rankmetrics/indicators.hpp"
#include "rankmetrics/numeric.hpp"
#include "rankmetrics/pipeline.hpp"
#include "rankmetrics/ranking.hpp"
#include "rankmetrics/stats.hpp"
#include "rankmetrics/synth.hpp"
#include "rankmetrics/table.hpp"
