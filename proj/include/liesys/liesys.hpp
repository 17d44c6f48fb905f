#ifndef LIESYS_LIESYS_HPP
#define LIESYS_LIESYS_HPP

#include "liesys/catalog.hpp"
#include "liesys/errors.hpp"
#include "liesys/field_space.hpp"
#include "liesys/integrate.hpp"
#include "liesys/parse.hpp"
#include "liesys/polynomial.hpp"
#include "liesys/rational.hpp"
#include "liesys/structure.hpp"
#include "liesys/superpose.hpp"
#include "liesys/tdvf.hpp"
#include "liesys/time_expr.hpp"
#include "liesys/transform.hpp"
#include "liesys/univariate.hpp"
#include "liesys/vector_field.hpp"

#endif  // LIESYS_LIESYS_HPP
