#pragma once

#include "version.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "params.hpp"
#include "config.hpp"
#include "response.hpp"
#include "propagation.hpp"
#include "fft.hpp"
#include "parallel.hpp"
#include "spectra.hpp"
#include "correlations.hpp"
#include "io.hpp"
