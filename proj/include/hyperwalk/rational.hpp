#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>

namespace hyperwalk {

// Arbitrary-precision rationals back the exact-arithmetic oracle mode.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Exact conversion of a double: every finite double is a dyadic rational.
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::domain_error("non-finite value");
    Rational r;
    int exp = 0;
    double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
    for (int i = 0; i < 64 && m != 0.0; ++i) {
        m *= 2.0;
        exp -= 1;
        const double d = std::trunc(m);
        r = r * 2 + BigInt(static_cast<long long>(d));
        m -= d;
    }
    if (exp >= 0) {
        r *= Rational(BigInt(1) << exp);
    } else {
        r /= Rational(BigInt(1) << (-exp));
    }
    return r;
}

inline double rational_to_double(const Rational& r) {
    return r.convert_to<double>();
}

inline Rational rational_pow(Rational base, long e) {
    Rational out = 1;
    for (long i = 0; i < e; ++i) out *= base;
    return out;
}

inline BigInt binomial_big(long n, long k) {
    if (k < 0 || k > n) return 0;
    BigInt r = 1;
    for (long i = 0; i < k; ++i) {
        r *= (n - i);
        r /= (i + 1);
    }
    return r;
}

}  // namespace hyperwalk
