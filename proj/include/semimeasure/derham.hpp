#pragma once

#include "semimeasure/family.hpp"
#include "semimeasure/super.hpp"

namespace semimeasure {

// Differential form with almost-Gaussian coefficients sharing one form q:
// components p_I(x) e^{-q(x)/2} dx_I, keyed by ascending index sets.
struct AGForm {
    FinVec space;
    PosDefForm q;
    int degree = 0;
    std::map<std::vector<int>, Polynomial> comps;

    AGForm() = default;
    AGForm(FinVec sp, PosDefForm form, int deg);
    void add_comp(std::vector<int> idx, const Polynomial& p); // sorts, signs, merges
    bool is_zero() const { return comps.empty(); }
    AGForm scaled(const Scalar& c) const;
    bool operator==(const AGForm& o) const;
};

struct OrientedForm {
    AGForm form;
    Scalar or_coeff = Scalar::one();
    std::vector<HaarTag> tags;

    bool operator==(const OrientedForm& o) const;
};

AGForm exterior_d(const AGForm& w);

// Integration along the fibers of a surjection with oriented kernel; the
// q-orthogonal splitting keeps every Gaussian fiber integral in the
// scalar ring.  Degree drops by the kernel dimension.
OrientedForm fiber_integrate(const OrientedForm& w, const LinMap& beta);

// Pullback of forms along an injection; the cokernel orientation line is
// tagged, never silently trivialized.
OrientedForm restrict_form_deRham(const OrientedForm& w, const LinMap& alpha);

// Complex structure on a window: coordinates paired (2k, 2k+1) from the
// bottom; complex lattice points are unions of pairs.
bool is_complex_subspace(const WindowSpace& w, const LatticeSubspace& u);
// Canonical positive orientation transition of a complex-paired gap.
int complex_orientation(const WindowSpace& w, const LatticeSubspace& u1, const LatticeSubspace& u2);
// The canonical orientation theory on the complex-paired sublattice.
OrientationTheory complex_orientation_theory(const WindowSpace& w);

struct DeRhamFamily {
    WindowSpace w;
    OrientationTheory orient;
    bool complex_model = false;
    std::map<FamilyKey, OrientedForm> entries;

    const OrientedForm& entry(const LatticeSubspace& u, const LatticeSubspace& up) const;
};

// Gaussian volume seed: every entry is the normalized top form
// sigma^{-m} sqrt(det q) e^{-q/2} dx_top on its subquotient, graded with
// the shift dim(U/U1).
DeRhamFamily build_semiinf_derham(const OrientationTheory& orient, const QuadraticTheory& q,
                                  bool complex_model);

// Structure-map compatibilities: fiber integration along quotient
// shrinks and transverse-contraction restriction along U shrinks, with
// the q-Haar discharge.
AuditReport check_derham_coherence(const DeRhamFamily& fam, const QuadraticTheory& q);

// form-degree minus the subquotient dimension: the torsor-normalized
// grading of a family entry.
long derham_torsor_degree(const OrientedForm& f, const LatticeSubspace& u, const LatticeSubspace& up);

// Bounded complex of finite-dimensional spaces with d o d = 0.
struct ComplexOfSpaces {
    std::vector<FinVec> spaces;  // V^0, V^1, ...
    std::vector<LinMap> diffs;   // d_i : V^i -> V^{i+1}

    void validate() const; // shapes and d^2 = 0; throws NotAComplex
    SuperVec collapse() const;
    QMat d_even_to_odd() const;
    QMat d_odd_to_even() const;
};

ComplexOfSpaces cv_complex(const FinVec& v); // V --id--> V in degrees 0, 1

// General (non-tensor-split) measure datum on a super space: components
// keyed by odd monomials with polynomial coefficients, one Gaussian form.
struct SuperDatum {
    SuperVec space;
    PosDefForm q; // on the even part
    std::map<std::vector<int>, Polynomial> comps;
    Scalar mu_coeff = Scalar::one();
    int z2_grade = 0;

    static SuperDatum from_super_measure(const SuperMeasure& m);
    void add_comp(std::vector<int> idx, const Polynomial& p);
    bool is_zero() const { return comps.empty(); }
    bool operator==(const SuperDatum& o) const;
};

// The odd differential induced by the complex: dual-number transport
// along 1 + eps d_V, taking the eps component.  Odd of degree one,
// squares to zero exactly when d_V does.
SuperDatum koszul_differential(const ComplexOfSpaces& c, const HaarTheory& h, const SuperDatum& m);

// Hand-assembled contraction operator for the identity complex CV,
// kept as an independent cross-check of the transport construction.
SuperDatum koszul_direct_cv(const SuperDatum& m);

} // namespace semimeasure
