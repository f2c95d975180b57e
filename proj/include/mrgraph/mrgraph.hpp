#pragma once

// Umbrella header: causal graph inference from genotype/phenotype data with
// online FDR control, plus the matching simulator and comparison metrics.

#include "mrgraph/bigint.hpp"
#include "mrgraph/correlation.hpp"
#include "mrgraph/format.hpp"
#include "mrgraph/graph.hpp"
#include "mrgraph/independence.hpp"
#include "mrgraph/io.hpp"
#include "mrgraph/linalg.hpp"
#include "mrgraph/lond.hpp"
#include "mrgraph/metrics.hpp"
#include "mrgraph/orientation.hpp"
#include "mrgraph/pipeline.hpp"
#include "mrgraph/simulation.hpp"
#include "mrgraph/skeleton.hpp"
#include "mrgraph/stats.hpp"
