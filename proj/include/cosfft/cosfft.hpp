#pragma once

#include "bench.hpp"
#include "black76.hpp"
#include "classic.hpp"
#include "density.hpp"
#include "errors.hpp"
#include "fft.hpp"
#include "models.hpp"
#include "nufft.hpp"
#include "nufft_pricer.hpp"
#include "phase.hpp"
#include "truncation.hpp"
