#pragma once

#include "aic.hpp"
#include "convolution.hpp"
#include "epsilon.hpp"
#include "errors.hpp"
#include "experiment.hpp"
#include "io.hpp"
#include "maps.hpp"
#include "parallel.hpp"
#include "renewal.hpp"
#include "rng.hpp"
#include "spectral.hpp"
#include "symbolic.hpp"
