#ifndef PDEFR_PDEFR_HPP
#define PDEFR_PDEFR_HPP

#include "pdefr/bounds.hpp"
#include "pdefr/error.hpp"
#include "pdefr/fft.hpp"
#include "pdefr/fields.hpp"
#include "pdefr/fourier.hpp"
#include "pdefr/grid.hpp"
#include "pdefr/harness.hpp"
#include "pdefr/io.hpp"
#include "pdefr/propagators.hpp"
#include "pdefr/recovery.hpp"
#include "pdefr/rng.hpp"

#endif  // PDEFR_PDEFR_HPP
