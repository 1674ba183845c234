#pragma once

#include "semimeasure/lattice.hpp"
#include "semimeasure/measure.hpp"

namespace semimeasure {

struct SuperVec {
    FinVec even, odd;

    SuperVec() = default;
    SuperVec(FinVec e, FinVec o);
    bool operator==(const SuperVec& o) const { return even == o.even && odd == o.odd; }
};

// Element of the exterior algebra over the basis of `gens`; terms keyed
// by strictly increasing index lists, products normalized with Koszul
// signs.
class ExteriorElement {
public:
    ExteriorElement() = default;
    explicit ExteriorElement(FinVec gens) : gens_(std::move(gens)) {}

    static ExteriorElement unit(const FinVec& gens);
    static ExteriorElement generator(const FinVec& gens, int i);
    static ExteriorElement monomial(const FinVec& gens, std::vector<int> idx, const Scalar& c);

    const FinVec& gens() const { return gens_; }
    const std::map<std::vector<int>, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int top_degree() const;

    ExteriorElement operator+(const ExteriorElement& o) const;
    ExteriorElement operator-(const ExteriorElement& o) const;
    ExteriorElement wedge(const ExteriorElement& o) const;
    ExteriorElement scaled(const Scalar& c) const;

    // Coefficient of the full top cell.
    Scalar top_coefficient() const;
    // Left interior derivative against the k-th generator.
    ExteriorElement left_derivative(int k) const;
    // Substitute each generator by a degree-one element of the target
    // algebra and expand.
    ExteriorElement substitute(const FinVec& new_gens, const std::vector<ExteriorElement>& images) const;

    bool operator==(const ExteriorElement& o) const { return gens_ == o.gens_ && terms_ == o.terms_; }

    void add_term(std::vector<int> idx, const Scalar& c); // sorts, applies the sign

private:
    FinVec gens_;
    std::map<std::vector<int>, Scalar> terms_;
};

// Measure on a supervector space: an almost Gaussian measure on the even
// part, a function in the odd generators (the exterior algebra of the
// odd dual), and the coefficient on the det(odd) half of the mu-line.
struct SuperMeasure {
    SuperVec space;
    AlmostGaussianMeasure even_part;
    ExteriorElement odd_part; // generators labeled by the odd basis
    Scalar mu_coeff = Scalar::one();
    std::vector<HaarTag> tags;
    int z2_grade = 0;

    SuperMeasure() = default;
    SuperMeasure(SuperVec sp, AlmostGaussianMeasure even, ExteriorElement odd, Scalar mu);
    bool operator==(const SuperMeasure& o) const;
};

struct SuperLinMap {
    LinMap even, odd;

    // Splits a block matrix over the two gradings; mixed blocks are a
    // parity violation.
    static SuperLinMap from_block(const SuperVec& src, const SuperVec& dst, const QMat& block);
};

Scalar berezin_integrate(const SuperMeasure& m);
SuperMeasure super_pushforward(const SuperMeasure& m, const SuperLinMap& beta);
SuperMeasure super_pullback(const SuperMeasure& m, const SuperLinMap& alpha);

// Semiinfinite wedge vectors in the Maya encoding: a monomial is the
// window part of a decreasing sequence, i.e. any index subset together
// with the implicit tail below the window; charge = |S| - N.
struct WedgeVector {
    int N = 1;
    std::map<std::set<int>, Scalar> terms;

    static WedgeVector vacuum(const WindowSpace& w, int charge);
    static WedgeVector monomial(const WindowSpace& w, std::set<int> s, const Scalar& c);
    bool is_zero() const { return terms.empty(); }
    WedgeVector operator+(const WedgeVector& o) const;
    WedgeVector scaled(const Scalar& c) const;
    bool operator==(const WedgeVector& o) const { return N == o.N && terms == o.terms; }

    void add_term(const std::set<int>& s, const Scalar& c);
};

long wedge_charge(int N, const std::set<int>& s);
// Maya encoding (charge, excitations vs the charge vacuum).
std::pair<long, std::set<int>> maya_encoding(int N, const std::set<int>& s);
std::set<int> maya_decoding(int N, long charge, const std::set<int>& excitations);

// Direct-limit structure map from the from_U stage to the to_U stage:
// wedge the gap into each monomial (left, decreasing convention with the
// insertion normalization), scaled by the theory's transition.
WedgeVector wedge_transition(const WedgeVector& v, const LatticeSubspace& from_u,
                             const LatticeSubspace& to_u, const DetTheory& theory);

enum class CliffordKind { Create, Annihilate };
WedgeVector clifford_action(CliffordKind kind, int index, const WedgeVector& v);

} // namespace semimeasure
