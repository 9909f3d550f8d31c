#pragma once

#include "dob/affine.hpp"
#include "dob/basins.hpp"
#include "dob/bifurcation.hpp"
#include "dob/billiard.hpp"
#include "dob/catalog.hpp"
#include "dob/convex.hpp"
#include "dob/errors.hpp"
#include "dob/geometry.hpp"
#include "dob/io.hpp"
#include "dob/lyapunov.hpp"
#include "dob/parallel.hpp"
#include "dob/perturb.hpp"
#include "dob/return_maps.hpp"
#include "dob/singular.hpp"
#include "dob/skew_product.hpp"
