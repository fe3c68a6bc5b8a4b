#pragma once

#include "vd/cluster.hpp"
#include "vd/correlation.hpp"
#include "vd/diagnostics.hpp"
#include "vd/distance.hpp"
#include "vd/eigen.hpp"
#include "vd/error.hpp"
#include "vd/fne.hpp"
#include "vd/ingest.hpp"
#include "vd/lexical.hpp"
#include "vd/projection.hpp"
#include "vd/representative.hpp"
#include "vd/synth.hpp"
#include "vd/ternary.hpp"
