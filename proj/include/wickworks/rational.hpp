#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>

namespace wickworks {

// Expression templates are off so the type plays well with Eigen and auto.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

Integer factorial(int n);
Integer double_factorial(int n);  // (-1)!! = 0!! = 1
Integer binomial(int n, int k);

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
    return Rational(Integer(num), Integer(den));
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_string(const Rational& r);

}  // namespace wickworks
