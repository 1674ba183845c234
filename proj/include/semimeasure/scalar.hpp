#pragma once

#include <complex>
#include <map>
#include <string>

#include "semimeasure/rational.hpp"

namespace semimeasure {

// Gaussian rational a + b*i.
struct GaussQ {
    QQ re, im;

    GaussQ() : re(0), im(0) {}
    GaussQ(QQ r) : re(std::move(r)), im(0) {}
    GaussQ(QQ r, QQ i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    GaussQ operator+(const GaussQ& o) const { return {re + o.re, im + o.im}; }
    GaussQ operator-(const GaussQ& o) const { return {re - o.re, im - o.im}; }
    GaussQ operator-() const { return {-re, -im}; }
    GaussQ operator*(const GaussQ& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    GaussQ conj() const { return {re, -im}; }
    GaussQ inv() const {
        QQ n = re * re + im * im;
        require(n != 0, "DivisionByZero", "inverse of zero Gaussian rational");
        return {re / n, -im / n};
    }
    bool operator==(const GaussQ& o) const { return re == o.re && im == o.im; }
};

// Element of the scalar ring: a finite sum of terms
//
//     c * sigma^(s/2) * sqrt(r),   c in Q(i),  s in Z,  r squarefree positive,
//
// where sigma stands for (2*pi)^(1/2) as a formal unit.  The normal form
// (merged terms, squarefree radicands, no zero coefficients) makes
// equality syntactic, so every identity in the calculus is decidable.
class Scalar {
public:
    struct Key {
        int sig2;  // twice the exponent of sigma
        ZZ rad;    // squarefree positive radicand
        bool operator<(const Key& o) const {
            if (sig2 != o.sig2) return sig2 < o.sig2;
            return rad < o.rad;
        }
        bool operator==(const Key& o) const { return sig2 == o.sig2 && rad == o.rad; }
    };

    Scalar() = default;

    static Scalar zero() { return Scalar(); }
    static Scalar one() { return of(QQ(1)); }
    static Scalar of(const QQ& q);
    static Scalar of_int(long n) { return of(QQ(n)); }
    static Scalar imag_unit();
    // sigma^(halves/2); sigma_pow(2) is sigma itself, sigma_pow(-2) = 1/sigma.
    static Scalar sigma_pow(int halves);
    // Exact square root of a positive rational, radicand reduced squarefree.
    static Scalar sqrt_rational(const QQ& q);
    static Scalar term(const GaussQ& c, int sig2, const ZZ& rad);

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    bool is_rational() const;
    // The rational value when is_rational(), error otherwise.
    QQ rational_value() const;

    // True when every term has a positive real coefficient (each basis
    // monomial sigma^k sqrt(r) is a positive real, so the sum is positive).
    bool is_positive() const;
    bool is_negative() const;
    bool has_determinate_sign() const { return is_zero() || is_positive() || is_negative(); }
    Scalar abs_value() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator-() const;
    Scalar operator*(const Scalar& o) const;
    Scalar& operator+=(const Scalar& o) { *this = *this + o; return *this; }
    Scalar& operator*=(const Scalar& o) { *this = *this * o; return *this; }

    // Reciprocal of a single-term scalar; mixed-radicand divisors are
    // rejected with DivisionUnsupported.
    Scalar inverse() const;
    Scalar div(const Scalar& o) const { return *this * o.inverse(); }
    Scalar pow(int k) const;
    Scalar conj() const;

    bool operator==(const Scalar& o) const { return terms_ == o.terms_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }
    bool single_term() const { return terms_.size() == 1; }

    const std::map<Key, GaussQ>& terms() const { return terms_; }

    // Display-only numeric value with sigma^2 -> 2*pi; never used in
    // equality tests.
    std::complex<double> to_complex() const;

    std::string to_string() const;
    static Scalar parse(const std::string& s);

private:
    void add_term(const Key& k, const GaussQ& c);
    std::map<Key, GaussQ> terms_;
};

inline Scalar operator*(const QQ& q, const Scalar& s) { return Scalar::of(q) * s; }

// n = s^2 * f with f squarefree; returns {s, f}.
std::pair<ZZ, ZZ> extract_square(const ZZ& n);

} // namespace semimeasure
