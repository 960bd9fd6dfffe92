#pragma once

#include "minsurf/catalog.hpp"
#include "minsurf/classifier.hpp"
#include "minsurf/domain.hpp"
#include "minsurf/error.hpp"
#include "minsurf/expression.hpp"
#include "minsurf/grid.hpp"
#include "minsurf/immersion.hpp"
#include "minsurf/json_io.hpp"
#include "minsurf/nelder_mead.hpp"
#include "minsurf/parser.hpp"
#include "minsurf/surface.hpp"
#include "minsurf/verifier.hpp"
