#pragma once

// Umbrella header.

#include "meanmat/matrix.hpp"
#include "meanmat/rng.hpp"
#include "meanmat/parallel.hpp"
#include "meanmat/eig.hpp"
#include "meanmat/functions.hpp"
#include "meanmat/mean_matrix.hpp"
#include "meanmat/superop.hpp"
#include "meanmat/quadrature.hpp"
#include "meanmat/integral_forms.hpp"
#include "meanmat/search.hpp"
#include "meanmat/io.hpp"
