#pragma once

#include <optional>

#include "semimeasure/polynomial.hpp"
#include "semimeasure/quadform.hpp"

namespace semimeasure {

// One undischarged 1-dimensional line factor carried by a measure or a
// distribution: `line` names the factor (a |det(...)^*| or det(...) or
// OR(...) symbol over explicit basis labels), `power` its multiplicity,
// `coeff` the stored multiple of the coordinate basis element.
struct HaarTag {
    std::string line;
    int power = 1;
    Scalar coeff = Scalar::one();

    bool operator==(const HaarTag& o) const { return line == o.line && power == o.power && coeff == o.coeff; }
    bool operator<(const HaarTag& o) const {
        if (line != o.line) return line < o.line;
        return power < o.power;
    }
};

std::vector<HaarTag> normalize_tags(std::vector<HaarTag> tags);

// p * gamma_q with gamma_q the Gaussian measure of total mass one, plus
// any line factors picked up from pullbacks.
struct AlmostGaussianMeasure {
    FinVec space;
    PosDefForm q;
    Polynomial p;
    std::vector<HaarTag> tags;

    AlmostGaussianMeasure() = default;
    AlmostGaussianMeasure(PosDefForm form, Polynomial poly, std::vector<HaarTag> t = {});

    static AlmostGaussianMeasure gaussian(const PosDefForm& form);

    bool is_zero() const { return p.is_zero(); }
    AlmostGaussianMeasure scaled(const Scalar& c) const;
    AlmostGaussianMeasure operator+(const AlmostGaussianMeasure& o) const;

    // integral of x^e against the measure (tags ignored).
    Scalar moment(const std::vector<int>& exponent) const;

    bool operator==(const AlmostGaussianMeasure& o) const;
    bool operator!=(const AlmostGaussianMeasure& o) const { return !(*this == o); }
};

// p(y) * exp(-q(y)/2), no Haar factor.
struct AGFunction {
    FinVec space;
    PosDefForm q;
    Polynomial p;

    bool operator==(const AGFunction& o) const { return space == o.space && q == o.q && p == o.p; }
};

// Distribution supported along an embedded subspace, smooth along it:
// the density against test functions is density_poly * exp(-F/2) with F
// the positive-semidefinite density_form (zero F = uniform along the
// support).  Tags must cancel against the paired measure's lines.
struct DeskDistribution {
    LinMap support; // injection U' -> W
    Polynomial density_poly;  // on U'
    QMat density_form;        // PSD on U'
    std::vector<HaarTag> tags;

    void validate() const;
    bool is_zero() const { return density_poly.is_zero(); }
};

// Isserlis: E[x^e] under the centered Gaussian with covariance cov,
// as a sum over perfect matchings of covariance entries.
QQ isserlis_moment(const QMat& cov, const std::vector<int>& exponent);

// Total integral; Gaussian moments are evaluated with covariance q^{-1}.
// Requires no undischarged tags.
Scalar integrate(const AlmostGaussianMeasure& mu);

// Direct image along a surjection: form pushes to the Schur complement,
// the polynomial is Wick-integrated over the q-orthogonal fiber split.
AlmostGaussianMeasure pushforward_measure(const AlmostGaussianMeasure& mu, const LinMap& beta);

// Inverse image along an injection.  Normalized so that Gaussians pull
// back to Gaussians: the new tag carries dVol_{alpha,q}, the q-volume of
// the orthogonal complement on the cokernel's coordinate basis.
AlmostGaussianMeasure pullback_measure(const AlmostGaussianMeasure& mu, const LinMap& alpha);

// F(mu)(y) = integral of e^{i(x,y)} d mu; exact via the derivative
// recursion F(x_j mu) = -i d/dy_j F(mu).
AGFunction fourier(const AlmostGaussianMeasure& mu);

// The measure/function identification: p e^{-q/2} becomes p gamma_q.
AlmostGaussianMeasure function_to_measure(const AGFunction& f);

// Heisenberg generators acting on measures.  A word acts left to right
// (right-module convention), so [L_f, L_v] = f(v) holds literally.
struct HeisenbergOp {
    struct Gen {
        bool is_vector; // true: constant vector field; false: linear function
        std::vector<QQ> coeffs;
    };
    using Word = std::vector<Gen>;
    std::vector<std::pair<Scalar, Word>> words;

    static HeisenbergOp vector_op(const std::vector<QQ>& v);
    static HeisenbergOp covector_op(const std::vector<QQ>& f);
    HeisenbergOp then(const HeisenbergOp& next) const; // word concatenation
    HeisenbergOp operator+(const HeisenbergOp& o) const;
    HeisenbergOp scaled(const Scalar& c) const;
    static HeisenbergOp commutator(const HeisenbergOp& a, const HeisenbergOp& b);
};

AlmostGaussianMeasure apply_heisenberg(const HeisenbergOp& op, const AlmostGaussianMeasure& mu);

// Pairing of a distribution with a measure: restrict the measure to the
// support, multiply by the density, integrate; every line must appear
// with cancelling powers or the pairing fails with TagMismatch.
Scalar pair_distribution(const DeskDistribution& phi, const AlmostGaussianMeasure& mu);

DeskDistribution distribution_pushforward(const DeskDistribution& phi, const LinMap& alpha);

} // namespace semimeasure
