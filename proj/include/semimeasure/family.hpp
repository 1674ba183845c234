#pragma once

#include "semimeasure/audit.hpp"
#include "semimeasure/lattice.hpp"
#include "semimeasure/measure.hpp"

namespace semimeasure {

// Positive definite quadratic theory on the window: the single form that
// induces a compatible system on every subquotient.
struct QuadraticTheory {
    WindowSpace w;
    PosDefForm form; // on w.space()

    QuadraticTheory(WindowSpace win, PosDefForm f);
    static QuadraticTheory standard(const WindowSpace& win);
};

// The induced form on U/U': restrict to U, then push down the quotient.
PosDefForm forms_from_theory(const QuadraticTheory& q, const LatticeSubspace& u, const LatticeSubspace& up);

// dVol_q coefficient on the coordinate basis of the model of U2/U1.
Scalar q_trivialize_haar(const QuadraticTheory& q, const LatticeSubspace& u1, const LatticeSubspace& u2);

// The Haar theory trivialized by q: transitions sqrt(det q_{U2/U1}).
HaarTheory haar_theory_of_quadratic(const QuadraticTheory& q);

QuadraticTheory quadratic_dual(const QuadraticTheory& q);

struct FamilyKey {
    uint32_t u, up;
    bool operator<(const FamilyKey& o) const { return u != o.u ? u < o.u : up < o.up; }
    bool operator==(const FamilyKey& o) const { return u == o.u && up == o.up; }
};

// Family of measures over all nested window pairs, one entry on each
// subquotient model, tensored against h(U)^* with coefficient absorbed
// into the entry.  Coherence: shrinking the quotient is pushforward,
// shrinking U is pullback with the Haar transition discharged.
struct CoherentMeasureFamily {
    WindowSpace w;
    HaarTheory haar;
    std::map<FamilyKey, AlmostGaussianMeasure> entries;

    const AlmostGaussianMeasure& entry(const LatticeSubspace& u, const LatticeSubspace& up) const;
    bool has_entry(const LatticeSubspace& u, const LatticeSubspace& up) const;
};

// All entries generated from the top measure on the full window by
// pulling back to U and pushing down to U/U', with the Haar transition
// scale applied; coherent whenever the scales and the top measure come
// from one quadratic theory.
CoherentMeasureFamily generate_family(const WindowSpace& w, const HaarTheory& haar,
                                      const AlmostGaussianMeasure& top);

CoherentMeasureFamily gaussian_family(const QuadraticTheory& q, const LatticeSubspace& u_ref);

// Verifies every nested pushforward and pullback compatibility among the
// present entries; failures become report entries, never throws.
AuditReport check_coherence(const CoherentMeasureFamily& fam);

// Entrywise Fourier transform onto the dual window, entries reindexed by
// (U,U') -> (U'^perp, U^perp), Haar theory transported to its dual.
CoherentMeasureFamily fourier_family(const CoherentMeasureFamily& fam);

// Window-level Heisenberg generator: a vector with coordinates on the
// window, or a functional with coordinate support on the window.
struct WindowGenerator {
    bool is_vector;
    std::vector<QQ> coeffs; // indexed by window coordinates

    LatticeSubspace coordinate_support(const WindowSpace& w) const;
};

// Applies the generator to every entry where it is defined (vector:
// support inside U; functional: support disjoint from U'); the result
// family keeps only those entries.
CoherentMeasureFamily heisenberg_on_family(const WindowGenerator& g, const CoherentMeasureFamily& fam);

// Germ of a distribution in the double direct limit: a representative
// on one subquotient plus the h(U1)-line coefficient.  Saturation maps
// push representatives to deeper stages for comparison.
struct DistributionGerm {
    WindowSpace w;
    HaarTheory haar;
    LatticeSubspace u1, u2; // u2 <= u1
    DeskDistribution dist;  // on the model of u1/u2, coordinate support
    Scalar h_coeff = Scalar::one();

    bool is_zero() const { return dist.is_zero(); }
};

// Push the representative to the stage (new_u1 >= u1, new_u2 <= u2).
DistributionGerm saturate_germ(const DistributionGerm& g, const LatticeSubspace& new_u1,
                               const LatticeSubspace& new_u2);

bool germ_equal(const DistributionGerm& a, const DistributionGerm& b);

// Heisenberg action on germs; saturates so that the generator acts
// faithfully, then differentiates or multiplies along the support.
// Derivatives transversal to the support are outside this class.
DistributionGerm germ_heisenberg(const WindowGenerator& g, const DistributionGerm& germ);

struct VacuumElement {
    LatticeSubspace u;
    DistributionGerm germ;
};

// delta function along U: the canonical unit at the (U,U) stage of the
// double limit, against the given Haar theory.
VacuumElement vacuum_delta(const WindowSpace& w, const HaarTheory& haar, const LatticeSubspace& u);

// Checks the annihilation relations for delta_U: every vector inside U
// and every functional vanishing on U kill it.
AuditReport vacuum_relations_report(const WindowSpace& w, const LatticeSubspace& u);

// Pairing of a family with a germ at the germ's representative stage;
// the h(U1)-lines cancel between the two sides.
Scalar pair_family(const CoherentMeasureFamily& fam, const DistributionGerm& germ);

int family_max_degree(const CoherentMeasureFamily& fam);

} // namespace semimeasure
