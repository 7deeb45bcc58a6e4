#pragma once

#include "cascade/correlate.hpp"
#include "cascade/errors.hpp"
#include "cascade/integrator.hpp"
#include "cascade/liouvillian.hpp"
#include "cascade/model.hpp"
#include "cascade/observables.hpp"
#include "cascade/quadrature.hpp"
#include "cascade/sweep.hpp"
#include "cascade/verify.hpp"
