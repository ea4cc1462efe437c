#pragma once

#include "lcatile/approx.hpp"
#include "lcatile/coset_union.hpp"
#include "lcatile/errors.hpp"
#include "lcatile/group.hpp"
#include "lcatile/linalg.hpp"
#include "lcatile/oracle.hpp"
#include "lcatile/rational.hpp"
#include "lcatile/region.hpp"
#include "lcatile/riesz.hpp"
#include "lcatile/tiling.hpp"
