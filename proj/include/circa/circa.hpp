#pragma once

// Umbrella header: macroscopic circulation analysis of probability flows on
// planar graphs. See README.md for the pipeline overview.

#include "circa/common.hpp"
#include "circa/matrix.hpp"
#include "circa/flowfield.hpp"
#include "circa/partition.hpp"
#include "circa/embedding.hpp"
#include "circa/potential.hpp"
#include "circa/maxflow.hpp"
#include "circa/extract.hpp"
#include "circa/io.hpp"
#include "circa/pipeline.hpp"
#include "circa/dot.hpp"
