// Exact amplitude arithmetic for the enumeration oracle.
//
// Every amplitude the protocol can produce lives in the field extension
// Q(1/sqrt2): numbers a + b/sqrt2 with rational a, b, one such pair per real
// and imaginary component. The field is closed under both splitter unitaries
// ((1/sqrt2)^2 = 1/2 is rational), so branch probabilities come out as exact
// rationals and determinism claims are asserted as exact zeros, not small
// floats.

#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace dcqkd::oracle {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Every finite double is a dyadic rational; the conversion is exact.
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument("cannot convert non-finite value to rational");
    }
    if (x == 0.0) return Rational(0);
    int exp = 0;
    const double frac = std::frexp(x, &exp); // |frac| in [0.5, 1)
    const auto mantissa = static_cast<long long>(std::ldexp(frac, 53));
    exp -= 53;
    Rational r(mantissa);
    if (exp > 0) {
        r *= Rational(BigInt(1) << exp);
    } else if (exp < 0) {
        r /= Rational(BigInt(1) << -exp);
    }
    return r;
}

// a + b/sqrt2 with rational a, b.
class ExactReal {
public:
    ExactReal() : a_(0), b_(0) {}
    ExactReal(int v) : a_(v), b_(0) {}                          // NOLINT(google-explicit-constructor)
    ExactReal(Rational a) : a_(std::move(a)), b_(0) {}          // NOLINT(google-explicit-constructor)
    ExactReal(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

    static ExactReal inv_sqrt2() { return ExactReal(Rational(0), Rational(1)); }

    const Rational& rational_part() const { return a_; }
    const Rational& inv_sqrt2_part() const { return b_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_rational() const { return b_ == 0; }

    friend ExactReal operator+(const ExactReal& x, const ExactReal& y) {
        return ExactReal(x.a_ + y.a_, x.b_ + y.b_);
    }
    friend ExactReal operator-(const ExactReal& x, const ExactReal& y) {
        return ExactReal(x.a_ - y.a_, x.b_ - y.b_);
    }
    friend ExactReal operator-(const ExactReal& x) { return ExactReal(-x.a_, -x.b_); }
    friend ExactReal operator*(const ExactReal& x, const ExactReal& y) {
        // (a1 + b1 r)(a2 + b2 r) with r^2 = 1/2
        return ExactReal(x.a_ * y.a_ + x.b_ * y.b_ / 2,
                         x.a_ * y.b_ + x.b_ * y.a_);
    }
    friend bool operator==(const ExactReal& x, const ExactReal& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator!=(const ExactReal& x, const ExactReal& y) { return !(x == y); }

    ExactReal& operator+=(const ExactReal& y) { return *this = *this + y; }

    double to_double() const {
        return a_.convert_to<double>() + b_.convert_to<double>() / std::sqrt(2.0);
    }

    // "1/2", "1/sqrt2", "1/4 + (1/2)/sqrt2", ...
    std::string str() const {
        std::ostringstream out;
        if (b_ == 0) {
            out << a_;
        } else if (a_ == 0) {
            if (b_ == 1) {
                out << "1/sqrt2";
            } else {
                out << '(' << b_ << ")/sqrt2";
            }
        } else {
            out << a_ << " + (" << b_ << ")/sqrt2";
        }
        return out.str();
    }

private:
    Rational a_;
    Rational b_;
};

struct ExactComplex {
    ExactReal re;
    ExactReal im;

    friend ExactComplex operator+(const ExactComplex& x, const ExactComplex& y) {
        return {x.re + y.re, x.im + y.im};
    }
    friend ExactComplex operator*(const ExactComplex& x, const ExactComplex& y) {
        return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
    }

    ExactComplex conj() const { return {re, -im}; }
    ExactReal norm_sq() const { return re * re + im * im; }
};

// Amplitude pair over (route a, route b); the oracle never models loss as a
// state, so there is no Lost variant here.
struct ExactState {
    ExactComplex amp_a;
    ExactComplex amp_b;

    ExactReal total_norm_sq() const { return amp_a.norm_sq() + amp_b.norm_sq(); }
};

struct ExactUnitary {
    ExactComplex m[2][2];

    ExactState apply(const ExactState& s) const {
        return ExactState{m[0][0] * s.amp_a + m[0][1] * s.amp_b,
                          m[1][0] * s.amp_a + m[1][1] * s.amp_b};
    }

    ExactUnitary adjoint() const {
        return ExactUnitary{{{m[0][0].conj(), m[1][0].conj()},
                             {m[0][1].conj(), m[1][1].conj()}}};
    }
};

// Same matrices as optics::alice_splitter / optics::bob_splitter, exactly.
inline const ExactUnitary& exact_alice_splitter() {
    static const ExactReal r = ExactReal::inv_sqrt2();
    static const ExactUnitary u{{{ExactComplex{r, 0}, ExactComplex{0, r}},
                                 {ExactComplex{0, r}, ExactComplex{r, 0}}}};
    return u;
}

inline const ExactUnitary& exact_bob_splitter() {
    static const ExactReal r = ExactReal::inv_sqrt2();
    static const ExactUnitary u{{{ExactComplex{r, 0}, ExactComplex{0, -r}},
                                 {ExactComplex{0, -r}, ExactComplex{r, 0}}}};
    return u;
}

} // namespace dcqkd::oracle
