#pragma once

#include "adjflux/adjoint.hpp"
#include "adjflux/commands.hpp"
#include "adjflux/conslaw.hpp"
#include "adjflux/dsl.hpp"
#include "adjflux/eval.hpp"
#include "adjflux/generator.hpp"
#include "adjflux/jetcalc.hpp"
#include "adjflux/manifold.hpp"
#include "adjflux/symmetry.hpp"
#include "adjflux/tree.hpp"
