#pragma once

#include "trfca/bitset.hpp"
#include "trfca/concepts.hpp"
#include "trfca/context.hpp"
#include "trfca/errors.hpp"
#include "trfca/formulas.hpp"
#include "trfca/group.hpp"
#include "trfca/lattice.hpp"
#include "trfca/oracle.hpp"
#include "trfca/perm.hpp"
#include "trfca/rational.hpp"
#include "trfca/spec_parse.hpp"
