#pragma once

#include "lefkit/arith.hpp"
#include "lefkit/partition.hpp"
#include "lefkit/lattice.hpp"
#include "lefkit/ext.hpp"
#include "lefkit/collections.hpp"
#include "lefkit/saturation.hpp"
#include "lefkit/rep_theory.hpp"
#include "lefkit/explorer.hpp"
#include "lefkit/serialize.hpp"
