#pragma once

// Umbrella header: the whole library in one include.

#include "tropcover/errors.hpp"
#include "tropcover/rational.hpp"
#include "tropcover/curve.hpp"
#include "tropcover/refine.hpp"
#include "tropcover/morphism.hpp"
#include "tropcover/isomorphism.hpp"
#include "tropcover/align.hpp"
#include "tropcover/action.hpp"
#include "tropcover/quotient.hpp"
#include "tropcover/galois.hpp"
#include "tropcover/catalog.hpp"
#include "tropcover/textio.hpp"
#include "tropcover/report.hpp"
