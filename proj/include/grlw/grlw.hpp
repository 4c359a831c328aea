#pragma once

#include "grlw/analytic.hpp"
#include "grlw/assembly.hpp"
#include "grlw/banded.hpp"
#include "grlw/element_forms.hpp"
#include "grlw/errors.hpp"
#include "grlw/experiments.hpp"
#include "grlw/spline_basis.hpp"
#include "grlw/time_integrator.hpp"
#include "grlw/vonneumann.hpp"
