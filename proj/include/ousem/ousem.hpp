#pragma once

#include "ousem/chaos.hpp"
#include "ousem/errors.hpp"
#include "ousem/gramian.hpp"
#include "ousem/linalg.hpp"
#include "ousem/mehler.hpp"
#include "ousem/model.hpp"
#include "ousem/polynomial.hpp"
#include "ousem/presets.hpp"
#include "ousem/quadrature.hpp"
#include "ousem/report_io.hpp"
#include "ousem/rng.hpp"
#include "ousem/simulate.hpp"
#include "ousem/spaces.hpp"
#include "ousem/symmetry.hpp"
#include "ousem/types.hpp"
