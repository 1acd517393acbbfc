#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "conegreen/polynomial.hpp"

namespace conegreen {

namespace detail {

struct GaussianInteger {
    Integer re, im;
    Integer norm() const { return re * re + im * im; }
    bool is_zero() const { return re == 0 && im == 0; }
    friend GaussianInteger operator*(const GaussianInteger &a, const GaussianInteger &b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussianInteger operator-(const GaussianInteger &a, const GaussianInteger &b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend bool operator==(const GaussianInteger &a, const GaussianInteger &b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator<(const GaussianInteger &a, const GaussianInteger &b) {
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
    }
};

inline Integer round_div(const Integer &a, const Integer &b) {
    // nearest integer to a/b, ties toward zero are fine for Euclidean division
    Integer two_a = 2 * a;
    Integer q = a / b;
    for (Integer cand = q - 1; cand <= q + 1; ++cand) {
        if (abs(two_a - 2 * cand * b) <= abs(b)) return cand;
    }
    return q;
}

inline GaussianInteger gi_div_nearest(const GaussianInteger &a, const GaussianInteger &b) {
    Integer n = b.norm();
    GaussianInteger num = a * GaussianInteger{b.re, -b.im};
    return {round_div(num.re, n), round_div(num.im, n)};
}

inline GaussianInteger gi_mod(const GaussianInteger &a, const GaussianInteger &b) {
    GaussianInteger q = gi_div_nearest(a, b);
    return a - q * b;
}

inline bool gi_divides(const GaussianInteger &d, const GaussianInteger &a) {
    return gi_mod(a, d).is_zero();
}

inline GaussianInteger gi_exact_div(const GaussianInteger &a, const GaussianInteger &d) {
    return gi_div_nearest(a, d);
}

inline GaussianInteger gi_gcd(GaussianInteger a, GaussianInteger b) {
    while (!b.is_zero()) {
        GaussianInteger r = gi_mod(a, b);
        a = b;
        b = r;
    }
    return a;
}

// First-quadrant associate (re > 0, im >= 0); zero stays zero.
inline GaussianInteger gi_normalize(GaussianInteger g) {
    for (int k = 0; k < 3 && !(g.re > 0 && g.im >= 0); ++k) g = g * GaussianInteger{0, 1};
    return g;
}

inline Integer mulmod(const Integer &a, const Integer &b, const Integer &m) { return a * b % m; }

inline Integer powmod(Integer base, Integer exp, const Integer &m) {
    Integer result = 1;
    base %= m;
    while (exp > 0) {
        if (exp % 2 == 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp /= 2;
    }
    return result;
}

inline bool miller_rabin(const Integer &n) {
    if (n < 2) return false;
    for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    Integer d = n - 1;
    int r = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++r;
    }
    for (int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        Integer x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 0; i < r - 1; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

inline Integer pollard_rho(const Integer &n) {
    if (n % 2 == 0) return 2;
    for (Integer c = 1;; ++c) {
        Integer x = 2, y = 2, d = 1;
        auto f = [&](const Integer &v) { return (mulmod(v, v, n) + c) % n; };
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = gcd(Integer(x > y ? x - y : y - x), n);
        }
        if (d != n) return d;
    }
}

inline void factor_integer(Integer n, std::map<Integer, int> &out) {
    if (n <= 1) return;
    if (miller_rabin(n)) {
        out[n] += 1;
        return;
    }
    for (Integer p = 2; p * p <= n && p < 100000; ++p) {
        while (n % p == 0) {
            out[p] += 1;
            n /= p;
        }
    }
    if (n == 1) return;
    if (miller_rabin(n)) {
        out[n] += 1;
        return;
    }
    Integer d = pollard_rho(n);
    factor_integer(d, out);
    factor_integer(n / d, out);
}

// x with x^2 = -1 mod p, for prime p = 1 mod 4.
inline Integer sqrt_minus_one(const Integer &p) {
    Integer e = (p - 1) / 4;
    for (Integer b = 2; b < p; ++b) {
        Integer x = powmod(b, e, p);
        if (mulmod(x, x, p) == p - 1) return x;
    }
    throw std::logic_error("sqrt(-1) mod p not found");
}

// Gaussian prime factorization (up to units) of a nonzero Gaussian integer.
inline std::map<GaussianInteger, int> gi_factor(GaussianInteger g) {
    std::map<GaussianInteger, int> out;
    std::map<Integer, int> norm_factors;
    factor_integer(g.norm(), norm_factors);
    for (const auto &[p, e] : norm_factors) {
        std::vector<GaussianInteger> primes;
        if (p == 2) {
            primes.push_back(gi_normalize({1, 1}));
        } else if (p % 4 == 3) {
            primes.push_back({p, 0});
        } else {
            Integer x = sqrt_minus_one(p);
            GaussianInteger pi = gi_normalize(gi_gcd({p, 0}, {x, 1}));
            primes.push_back(pi);
            GaussianInteger bar = gi_normalize({pi.re, -pi.im});
            if (!(bar == pi)) primes.push_back(bar);
        }
        for (const auto &pi : primes) {
            while (gi_divides(pi, g)) {
                g = gi_exact_div(g, pi);
                out[pi] += 1;
            }
        }
    }
    return out;
}

inline std::vector<GaussianInteger> gi_divisors(const GaussianInteger &g) {
    auto factors = gi_factor(g);
    std::vector<GaussianInteger> divisors{GaussianInteger{1, 0}};
    for (const auto &[pi, e] : factors) {
        std::vector<GaussianInteger> next;
        GaussianInteger power{1, 0};
        for (int k = 0; k <= e; ++k) {
            for (const auto &d : divisors) next.push_back(d * power);
            power = power * pi;
        }
        divisors = std::move(next);
    }
    for (auto &d : divisors) d = gi_normalize(d);
    std::sort(divisors.begin(), divisors.end());
    divisors.erase(std::unique(divisors.begin(), divisors.end()), divisors.end());
    return divisors;
}

} // namespace detail

struct RootMultiset {
    std::vector<std::pair<GaussianRational, int>> roots; // sorted lexicographically
    bool nonrational_remainder = false;
};

// All roots of `poly` lying in Q(i), with exact multiplicities.  The flag is
// set iff a nonconstant factor without Gaussian-rational roots remains.
inline RootMultiset rational_roots(const Polynomial &poly) {
    if (poly.is_zero()) throw std::domain_error("rational_roots: zero polynomial");
    RootMultiset result;
    Polynomial p = poly;

    int at_zero = 0;
    while (!p.is_zero() && p.coeff(0).is_zero()) {
        p = divmod(p, Polynomial::variable()).first;
        ++at_zero;
    }
    if (at_zero > 0) result.roots.push_back({GaussianRational(0), at_zero});

    if (p.degree() >= 1) {
        // clear denominators to land in Z[i]
        Integer scale = 1;
        for (int k = 0; k <= p.degree(); ++k) {
            const GaussianRational &c = p.coeff(k);
            scale = lcm(scale, den(c.re));
            scale = lcm(scale, den(c.im));
        }
        auto coeff_int = [&](int k) {
            GaussianRational c = p.coeff(k) * GaussianRational(Rational(scale));
            return detail::GaussianInteger{num(c.re), num(c.im)};
        };
        auto lead = coeff_int(p.degree());
        auto trail = coeff_int(0);
        auto numerators = detail::gi_divisors(trail);
        auto denominators = detail::gi_divisors(lead);
        const detail::GaussianInteger units[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (const auto &dnum : numerators) {
            for (const auto &dden : denominators) {
                for (const auto &u : units) {
                    detail::GaussianInteger n = dnum * u;
                    GaussianRational cand(Rational(n.re), Rational(n.im));
                    Integer dn = dden.norm();
                    GaussianRational dinv(Rational(dden.re, dn), Rational(-dden.im, dn));
                    cand *= dinv;
                    if (cand.is_zero()) continue;
                    if (!p(cand).is_zero()) continue;
                    Polynomial lin({-cand, GaussianRational(1)});
                    int mult = 0;
                    while (true) {
                        auto [q, r] = divmod(p, lin);
                        if (!r.is_zero()) break;
                        p = q;
                        ++mult;
                    }
                    if (mult > 0) result.roots.push_back({cand, mult});
                }
            }
        }
    }
    result.nonrational_remainder = p.degree() >= 1;
    std::sort(result.roots.begin(), result.roots.end(),
              [](const auto &a, const auto &b) { return lex_less(a.first, b.first); });
    return result;
}

} // namespace conegreen
