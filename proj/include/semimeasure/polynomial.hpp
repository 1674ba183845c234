#pragma once

#include <map>
#include <vector>

#include "semimeasure/linalg.hpp"
#include "semimeasure/scalar.hpp"

namespace semimeasure {

// Sparse polynomial with Scalar coefficients, variables indexed by the
// basis of its space.  Zero coefficients are never stored.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(FinVec space) : space_(std::move(space)) {}

    static Polynomial constant(const FinVec& space, const Scalar& c);
    static Polynomial one(const FinVec& space) { return constant(space, Scalar::one()); }
    static Polynomial variable(const FinVec& space, int i);
    static Polynomial linear(const FinVec& space, const std::vector<QQ>& coeffs);
    static Polynomial monomial(const FinVec& space, std::vector<int> exp, const Scalar& c);

    const FinVec& space() const { return space_; }
    const std::map<std::vector<int>, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int total_degree() const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial scaled(const Scalar& c) const;

    Polynomial partial(int var) const;
    Scalar eval(const std::vector<QQ>& point) const;
    Scalar constant_term() const;

    // Compose with a linear change of variables: variable i is replaced
    // by images[i], a polynomial on the new space.
    Polynomial substitute(const FinVec& new_space, const std::vector<Polynomial>& images) const;
    // x -> -x.
    Polynomial parity_flip() const;
    // Substitution along a linear map: p(m(y)) on m's source.
    Polynomial pullback(const LinMap& m) const;

    bool operator==(const Polynomial& o) const { return space_ == o.space_ && terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    void add_term(const std::vector<int>& exp, const Scalar& c);

private:
    FinVec space_;
    std::map<std::vector<int>, Scalar> terms_;
};

} // namespace semimeasure
