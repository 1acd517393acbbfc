#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "conegreen/errors.hpp"

namespace conegreen {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer num(const Rational &q) { return boost::multiprecision::numerator(q); }
inline Integer den(const Rational &q) { return boost::multiprecision::denominator(q); }

// Element of Q(i).  cpp_rational keeps both parts in lowest terms with
// positive denominators, so equality is structural.
struct GaussianRational {
    Rational re, im;

    GaussianRational() = default;
    GaussianRational(int v) : re(v) {}                       // NOLINT(google-explicit-constructor)
    GaussianRational(long long v) : re(v) {}                 // NOLINT(google-explicit-constructor)
    GaussianRational(const Rational &r) : re(r) {}           // NOLINT(google-explicit-constructor)
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static GaussianRational i() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussianRational conj() const { return {re, -im}; }
    Rational norm() const { return re * re + im * im; }

    GaussianRational operator-() const { return {-re, -im}; }

    GaussianRational &operator+=(const GaussianRational &o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational &operator-=(const GaussianRational &o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussianRational &operator*=(const GaussianRational &o) {
        Rational r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    GaussianRational &operator/=(const GaussianRational &o) {
        Rational n = o.norm();
        if (n == 0) throw std::domain_error("GaussianRational: division by zero");
        Rational r = (re * o.re + im * o.im) / n;
        im = (im * o.re - re * o.im) / n;
        re = r;
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational &b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational &b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational &b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational &b) { return a /= b; }
    friend bool operator==(const GaussianRational &a, const GaussianRational &b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational &a, const GaussianRational &b) { return !(a == b); }

    GaussianRational inverse() const {
        GaussianRational one(1);
        return one / *this;
    }

    // Total order used only for deterministic sorting (re, then im).
    friend bool lex_less(const GaussianRational &a, const GaussianRational &b) {
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
    }
};

inline GaussianRational conj(const GaussianRational &x) { return x.conj(); }

namespace detail {

inline std::string rational_to_string(const Rational &q) {
    std::string s = num(q).str();
    if (den(q) != 1) s += "/" + den(q).str();
    return s;
}

} // namespace detail

// Canonical serialization: "a/b", "c/d*i", "a/b+c/d*i" or "a/b-c/d*i",
// with "/1" omitted.  Zero prints as "0".
inline std::string to_string(const GaussianRational &x) {
    if (x.im == 0) return detail::rational_to_string(x.re);
    std::string imag = detail::rational_to_string(x.im < 0 ? Rational(-x.im) : x.im) + "*i";
    if (x.re == 0) return (x.im < 0 ? "-" : "") + imag;
    return detail::rational_to_string(x.re) + (x.im < 0 ? "-" : "+") + imag;
}

inline std::ostream &operator<<(std::ostream &os, const GaussianRational &x) {
    return os << to_string(x);
}

// Accepts the canonical form plus the obvious variants ("i", "-i", "3i",
// "2 + 3/4 i").  Whitespace is ignored.
inline std::optional<GaussianRational> parse_gaussian_rational(const std::string &text) {
    std::string s;
    for (char c : text)
        if (!isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) return std::nullopt;

    size_t pos = 0;
    auto parse_part = [&](Rational &out, bool &is_imag) -> bool {
        is_imag = false;
        size_t start = pos;
        bool neg = false;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
            neg = s[pos] == '-';
            ++pos;
        }
        std::string digits;
        while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) digits += s[pos++];
        Integer numerator;
        bool have_digits = !digits.empty();
        numerator = have_digits ? Integer(digits) : Integer(1);
        Integer denominator = 1;
        if (pos < s.size() && s[pos] == '/') {
            if (!have_digits) return false;
            ++pos;
            std::string d;
            while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) d += s[pos++];
            if (d.empty()) return false;
            denominator = Integer(d);
            if (denominator == 0) return false;
        }
        if (pos < s.size() && (s[pos] == '*' || s[pos] == 'i')) {
            if (s[pos] == '*') {
                ++pos;
                if (pos >= s.size() || s[pos] != 'i') return false;
            }
            if (s[pos] == 'i') {
                ++pos;
                is_imag = true;
            }
        }
        if (!have_digits && !is_imag) return false;
        if (pos == start) return false;
        out = Rational(numerator, denominator);
        if (neg) out = -out;
        return true;
    };

    GaussianRational result;
    bool seen_real = false, seen_imag = false;
    while (pos < s.size()) {
        Rational part;
        bool is_imag = false;
        if (!parse_part(part, is_imag)) return std::nullopt;
        if (is_imag) {
            if (seen_imag) return std::nullopt;
            result.im += part;
            seen_imag = true;
        } else {
            if (seen_real) return std::nullopt;
            result.re += part;
            seen_real = true;
        }
    }
    if (!seen_real && !seen_imag) return std::nullopt;
    return result;
}

inline GaussianRational gaussian_rational_from_string(const std::string &text) {
    auto v = parse_gaussian_rational(text);
    if (!v) throw ParseError("invalid Gaussian rational literal: " + text, 0, 0);
    return *v;
}

} // namespace conegreen
