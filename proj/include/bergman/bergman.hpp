#pragma once

// Everything except the command-line front end.

#include "bergman/core.hpp"
#include "bergman/jet.hpp"
#include "bergman/domains.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/annulus_series.hpp"
#include "bergman/kernels.hpp"
#include "bergman/gram.hpp"
#include "bergman/log_jet.hpp"
#include "bergman/geometry.hpp"
#include "bergman/sampling.hpp"
#include "bergman/io.hpp"
#include "bergman/verify.hpp"
