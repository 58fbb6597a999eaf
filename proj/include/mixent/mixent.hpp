#pragma once

// Umbrella header.

#include "mixent/errors.hpp"
#include "mixent/numkernel.hpp"
#include "mixent/weights.hpp"
#include "mixent/gmm.hpp"
#include "mixent/entropy.hpp"
#include "mixent/calibrate.hpp"
#include "mixent/parallel.hpp"
#include "mixent/resample.hpp"
#include "mixent/simharness.hpp"
#include "mixent/io.hpp"
#include "mixent/dataset.hpp"
#include "mixent/config.hpp"
