#pragma once

#include <string>

#include "steer/dataset.hpp"
#include "steer/forest.hpp"

namespace steer::bench {

/// Pima fixture, ingested once.
const Dataset& pima();
/// Pima trained once with default hyperparameters.
const TrainResult& pima_trained();

}  // namespace steer::bench
