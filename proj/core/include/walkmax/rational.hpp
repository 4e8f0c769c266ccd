#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "walkmax/params.hpp"

namespace walkmax {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact step probabilities. Throw std::invalid_argument when the params
// carry no exact fraction.
Rational p_rational(const WalkParams& w);
Rational q_rational(const WalkParams& w);

}  // namespace walkmax
