#include "semimeasure/scalar.hpp"

#include <cmath>
#include <sstream>

namespace semimeasure {

std::pair<ZZ, ZZ> extract_square(const ZZ& n) {
    require(n > 0, "BadRadicand", "radicand must be positive");
    ZZ rem = n, outside = 1, free = 1;
    auto strip = [&](const ZZ& p) {
        int e = 0;
        while (mpz_divisible_p(rem.get_mpz_t(), p.get_mpz_t())) {
            rem /= p;
            ++e;
        }
        if (e) {
            ZZ half;
            mpz_pow_ui(half.get_mpz_t(), p.get_mpz_t(), e / 2);
            outside *= half;
            if (e & 1) free *= p;
        }
    };
    strip(ZZ(2));
    ZZ d = 3;
    while (d * d <= rem && d < 2000000) {
        strip(d);
        d += 2;
    }
    if (rem > 1) {
        // Remaining cofactor has no small prime factor; peel off a perfect
        // square if it is one, otherwise it is squarefree at this scale.
        if (mpz_perfect_square_p(rem.get_mpz_t())) {
            ZZ root;
            mpz_sqrt(root.get_mpz_t(), rem.get_mpz_t());
            outside *= root;
        } else {
            free *= rem;
        }
    }
    return {outside, free};
}

Scalar Scalar::of(const QQ& q) {
    Scalar s;
    s.add_term(Key{0, ZZ(1)}, GaussQ(q));
    return s;
}

Scalar Scalar::imag_unit() {
    Scalar s;
    s.add_term(Key{0, ZZ(1)}, GaussQ(QQ(0), QQ(1)));
    return s;
}

Scalar Scalar::sigma_pow(int halves) {
    Scalar s;
    s.add_term(Key{halves, ZZ(1)}, GaussQ(QQ(1)));
    return s;
}

Scalar Scalar::sqrt_rational(const QQ& q) {
    require(q > 0, "BadRadicand", "square root of non-positive rational");
    // sqrt(p/q) = sqrt(p*q)/q
    ZZ n = q.get_num() * q.get_den();
    auto [outside, rad] = extract_square(n);
    Scalar s;
    s.add_term(Key{0, rad}, GaussQ(QQ(outside) / QQ(q.get_den())));
    return s;
}

Scalar Scalar::term(const GaussQ& c, int sig2, const ZZ& rad) {
    auto [outside, free] = extract_square(rad);
    Scalar s;
    s.add_term(Key{sig2, free}, c * GaussQ(QQ(outside)));
    return s;
}

void Scalar::add_term(const Key& k, const GaussQ& c0) {
    GaussQ c = c0;
    c.re.canonicalize();
    c.im.canonicalize();
    if (c.is_zero()) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(k, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

bool Scalar::is_one() const {
    return terms_.size() == 1 && terms_.begin()->first == Key{0, ZZ(1)} &&
           terms_.begin()->second == GaussQ(QQ(1));
}

bool Scalar::is_rational() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && terms_.begin()->first == Key{0, ZZ(1)} &&
           terms_.begin()->second.im == 0;
}

QQ Scalar::rational_value() const {
    if (terms_.empty()) return QQ(0);
    require(is_rational(), "NotRational", "scalar is not a plain rational: " + to_string());
    return terms_.begin()->second.re;
}

bool Scalar::is_positive() const {
    if (terms_.empty()) return false;
    for (const auto& [k, c] : terms_)
        if (c.im != 0 || c.re <= 0) return false;
    return true;
}

bool Scalar::is_negative() const {
    if (terms_.empty()) return false;
    for (const auto& [k, c] : terms_)
        if (c.im != 0 || c.re >= 0) return false;
    return true;
}

Scalar Scalar::abs_value() const {
    if (is_zero() || is_positive()) return *this;
    if (is_negative()) return -*this;
    fail("IndeterminateSign", "cannot take |.| of mixed-sign scalar " + to_string());
}

Scalar Scalar::operator+(const Scalar& o) const {
    Scalar r = *this;
    for (const auto& [k, c] : o.terms_) r.add_term(k, c);
    return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
    Scalar r = *this;
    for (const auto& [k, c] : o.terms_) r.add_term(k, -c);
    return r;
}

Scalar Scalar::operator-() const {
    Scalar r;
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
    return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
    Scalar r;
    for (const auto& [k1, c1] : terms_) {
        for (const auto& [k2, c2] : o.terms_) {
            // sqrt(r1)*sqrt(r2) = g*sqrt((r1/g)(r2/g)) with g = gcd(r1,r2);
            // both factors squarefree and coprime, so the product stays
            // squarefree without any factorization.
            ZZ g;
            mpz_gcd(g.get_mpz_t(), k1.rad.get_mpz_t(), k2.rad.get_mpz_t());
            ZZ rad = (k1.rad / g) * (k2.rad / g);
            r.add_term(Key{k1.sig2 + k2.sig2, rad}, c1 * c2 * GaussQ(QQ(g)));
        }
    }
    return r;
}

Scalar Scalar::inverse() const {
    require(!terms_.empty(), "DivisionByZero", "inverse of zero scalar");
    require(terms_.size() == 1, "DivisionUnsupported",
            "division by a sum of distinct radical terms: " + to_string());
    const auto& [k, c] = *terms_.begin();
    // 1/(c * sigma^s * sqrt(r)) = (1/(c*r)) * sigma^{-s} * sqrt(r)
    Scalar r;
    r.add_term(Key{-k.sig2, k.rad}, c.inv() * GaussQ(QQ(1) / QQ(k.rad)));
    return r;
}

Scalar Scalar::pow(int e) const {
    if (e == 0) return one();
    Scalar base = e > 0 ? *this : inverse();
    int n = e > 0 ? e : -e;
    Scalar r = one();
    for (int i = 0; i < n; ++i) r = r * base;
    return r;
}

Scalar Scalar::conj() const {
    Scalar r;
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, c.conj());
    return r;
}

std::complex<double> Scalar::to_complex() const {
    std::complex<double> z(0, 0);
    const double sigma = std::sqrt(2.0 * 3.14159265358979323846);
    for (const auto& [k, c] : terms_) {
        double mag = std::pow(sigma, k.sig2 / 2.0) * std::sqrt(k.rad.get_d());
        z += std::complex<double>(c.re.get_d(), c.im.get_d()) * mag;
    }
    return z;
}

namespace {

void render_monomial(std::ostringstream& os, const QQ& coeff, bool imag, int sig2, const ZZ& rad) {
    std::string factors;
    if (imag) factors += "*i";
    if (rad != 1) factors += "*sqrt:" + rad.get_str();
    if (sig2 != 0) {
        factors += "*sigma:";
        if (sig2 % 2 == 0)
            factors += std::to_string(sig2 / 2);
        else
            factors += std::to_string(sig2) + "/2";
    }
    if (coeff == 1 && !factors.empty())
        os << factors.substr(1);
    else if (coeff == -1 && !factors.empty())
        os << "-" << factors.substr(1);
    else
        os << coeff.get_str() << factors;
}

} // namespace

std::string Scalar::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (c.re != 0) {
            if (!first) os << (c.re > 0 ? " + " : " - ");
            render_monomial(os, (!first && c.re < 0) ? QQ(-c.re) : c.re, false, k.sig2, k.rad);
            first = false;
        }
        if (c.im != 0) {
            if (!first) os << (c.im > 0 ? " + " : " - ");
            render_monomial(os, (!first && c.im < 0) ? QQ(-c.im) : c.im, true, k.sig2, k.rad);
            first = false;
        }
    }
    return os.str();
}

namespace {

Scalar parse_monomial(const std::string& mono) {
    QQ coeff(1);
    bool imag = false;
    int sig2 = 0;
    ZZ rad(1);
    bool saw_factor = false;
    size_t pos = 0;
    while (pos < mono.size()) {
        size_t star = mono.find('*', pos);
        std::string f = mono.substr(pos, star == std::string::npos ? std::string::npos : star - pos);
        pos = star == std::string::npos ? mono.size() : star + 1;
        if (f.empty()) fail("BadScalar", "empty factor in '" + mono + "'");
        saw_factor = true;
        if (f == "i") {
            imag = !imag ? true : (coeff = -coeff, false);
        } else if (f == "-i") {
            coeff = -coeff;
            imag = !imag ? true : (coeff = -coeff, false);
        } else if (f.rfind("sqrt:", 0) == 0) {
            ZZ r(f.substr(5));
            require(r > 0, "BadScalar", "sqrt of non-positive in '" + mono + "'");
            ZZ g;
            mpz_gcd(g.get_mpz_t(), rad.get_mpz_t(), r.get_mpz_t());
            coeff *= QQ(g);
            rad = (rad / g) * (r / g);
        } else if (f.rfind("sigma:", 0) == 0) {
            std::string e = f.substr(6);
            size_t slash = e.find('/');
            if (slash == std::string::npos) {
                sig2 += 2 * std::stoi(e);
            } else {
                require(e.substr(slash + 1) == "2", "BadScalar", "sigma exponent must be k or k/2");
                sig2 += std::stoi(e.substr(0, slash));
            }
        } else {
            coeff *= parse_rational(f);
        }
    }
    require(saw_factor, "BadScalar", "empty monomial");
    auto [outside, free] = extract_square(rad);
    coeff *= QQ(outside);
    GaussQ c = imag ? GaussQ(QQ(0), coeff) : GaussQ(coeff);
    Scalar s = Scalar::term(GaussQ(QQ(1)), sig2, free);
    return s * Scalar::term(c, 0, ZZ(1));
}

} // namespace

Scalar Scalar::parse(const std::string& input) {
    // strip whitespace
    std::string s;
    for (char c : input)
        if (c != ' ' && c != '\t') s += c;
    if (s.empty() || s == "0") return Scalar::zero();
    Scalar total = Scalar::zero();
    size_t pos = 0;
    bool neg = false;
    if (s[0] == '-') { neg = true; pos = 1; }
    else if (s[0] == '+') { pos = 1; }
    while (pos < s.size()) {
        size_t next = pos;
        // a sign immediately after ':' belongs to an exponent, not a new term
        while (next < s.size() && !((s[next] == '+' || s[next] == '-') && next > pos && s[next - 1] != ':')) ++next;
        std::string mono = s.substr(pos, next - pos);
        Scalar m = parse_monomial(mono);
        total = neg ? total - m : total + m;
        if (next >= s.size()) break;
        neg = s[next] == '-';
        pos = next + 1;
    }
    return total;
}

} // namespace semimeasure
