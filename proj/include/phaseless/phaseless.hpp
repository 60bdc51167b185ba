#pragma once

#include "phaseless/approx.hpp"
#include "phaseless/bessel.hpp"
#include "phaseless/errors.hpp"
#include "phaseless/fft_convolve.hpp"
#include "phaseless/kernels.hpp"
#include "phaseless/magnitudes.hpp"
#include "phaseless/pipeline.hpp"
#include "phaseless/quadrature.hpp"
#include "phaseless/signals.hpp"
