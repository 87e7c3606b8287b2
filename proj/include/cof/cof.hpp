#pragma once

#include "cof/corpus.hpp"
#include "cof/features.hpp"
#include "cof/letor_io.hpp"
#include "cof/metrics.hpp"
#include "cof/pipeline.hpp"
#include "cof/rankers/rankers.hpp"
#include "cof/synth.hpp"
#include "cof/text_pipeline.hpp"
#include "cof/run_config.hpp"
