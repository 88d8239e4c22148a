#pragma once

#include "srqsd/error.hpp"
#include "srqsd/quadrature.hpp"
#include "srqsd/root_finding.hpp"
#include "srqsd/special_functions.hpp"
#include "srqsd/eigenvalue.hpp"
#include "srqsd/distribution.hpp"
#include "srqsd/bounds.hpp"
#include "srqsd/changepoint.hpp"
#include "srqsd/monte_carlo.hpp"

namespace srqsd {

inline constexpr const char* version = "0.1.0";

} // namespace srqsd
