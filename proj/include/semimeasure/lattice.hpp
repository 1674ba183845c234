#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "semimeasure/linalg.hpp"
#include "semimeasure/scalar.hpp"

namespace semimeasure {

// Truncated Laurent window: basis t^i for -N <= i < N.  The reference
// point U0 = span{t^i : i >= 0} models the Taylor subring.
struct WindowSpace {
    int N = 1;

    explicit WindowSpace(int n = 1) : N(n) { require(n >= 1, "BadWindow", "window size must be >= 1"); }

    int dim() const { return 2 * N; }
    int lo() const { return -N; }
    int hi() const { return N; } // exclusive
    FinVec space() const;
    static std::string label(int i) { return "t^" + std::to_string(i); }
    int index_of(int i) const { return i + N; } // coordinate position of t^i
    bool operator==(const WindowSpace& o) const { return N == o.N; }
};

// Coordinate subspace of a window, identified by its index set.  Within
// a finite window every subset contains a final segment [a, N), so the
// eventually-full condition is automatic; the semantics is S + t^N R[[t]].
struct LatticeSubspace {
    int N = 1;
    std::set<int> idx;

    LatticeSubspace() = default;
    LatticeSubspace(const WindowSpace& w, std::set<int> s);
    static LatticeSubspace from_mask(const WindowSpace& w, uint32_t mask);
    static LatticeSubspace reference(const WindowSpace& w); // U0 = {i >= 0}
    static LatticeSubspace full(const WindowSpace& w);
    static LatticeSubspace empty(const WindowSpace& w) { return LatticeSubspace(w, {}); }

    uint32_t mask() const;
    int dim() const { return static_cast<int>(idx.size()); }
    bool contains(int i) const { return idx.count(i) > 0; }
    bool leq(const LatticeSubspace& o) const;
    LatticeSubspace meet(const LatticeSubspace& o) const;
    LatticeSubspace join(const LatticeSubspace& o) const;
    LatticeSubspace complement() const;
    // Annihilator under the residue pairing <t^i, t^j> = delta_{i+j+1,0};
    // lives in the dual window of the same size.
    LatticeSubspace dual() const;
    bool operator==(const LatticeSubspace& o) const { return N == o.N && idx == o.idx; }
    bool operator<(const LatticeSubspace& o) const { return mask() < o.mask(); }
    std::string to_string() const;
};

std::vector<int> gap_indices(const LatticeSubspace& u1, const LatticeSubspace& u2); // sorted u2 \ u1
std::vector<LatticeSubspace> enumerate_lattice(const WindowSpace& w);

// Model space of the subquotient U/U' (U' <= U): coordinates t^i for
// i in U \ U', ascending.
FinVec subquotient_space(const WindowSpace& w, const LatticeSubspace& u, const LatticeSubspace& up);
// Coordinate projection U/U' -> U/U'' for U' <= U'' <= U.
LinMap subquotient_projection(const WindowSpace& w, const LatticeSubspace& u,
                              const LatticeSubspace& up, const LatticeSubspace& upp);
// Coordinate injection U1/U' -> U2/U' for U' <= U1 <= U2.
LinMap subquotient_injection(const WindowSpace& w, const LatticeSubspace& u1,
                             const LatticeSubspace& u2, const LatticeSubspace& up);

// Z-valued theory additive over gaps, pinned by its value at U0.
struct DimensionTheory {
    int N = 1;
    long base = 0; // value at U0

    long value(const LatticeSubspace& u) const;
    bool operator==(const DimensionTheory& o) const { return N == o.N && base == o.base; }
};

// d(U') - d(U), independent of the theory: the relative dimension [U':U].
long relative_dim(const LatticeSubspace& uprime, const LatticeSubspace& u);

DimensionTheory dual_dimension_theory(const DimensionTheory& d);

// Admissible short exact sequence of windows: strictly increasing index
// embeddings of the sub- and quotient windows whose images partition the
// total window.
struct WindowSES {
    WindowSpace sub, total, quot;
    std::map<int, int> incl;     // sub index -> total index
    std::map<int, int> quot_pos; // quot index -> total index

    void validate() const;
    LatticeSubspace alpha_preimage(const LatticeSubspace& u) const;
    LatticeSubspace beta_image(const LatticeSubspace& u) const;

    // Lower/upper block glue: sub occupies [-N, c), quot the rest.
    static WindowSES block(const WindowSpace& total, int split);
    // Even/odd interleave of two equal windows.
    static WindowSES interleave(const WindowSpace& sub, const WindowSpace& quot);
};

DimensionTheory sum_dimension_theory(const DimensionTheory& dsub, const DimensionTheory& dquot,
                                     const WindowSES& seq);

// Determinantal theory with based lines: line_scale(U) rescales the
// formal basis of Delta(U); trans(U1,U2) is the matrix entry of
// Delta(U1) (x) det(U2/U1) -> Delta(U2) over the normalized coordinate
// gap bases.  Coherence over a nested triple is multiplicative:
// t(U1,U3) = t(U2,U3) * t(U1,U2).
struct DetTheory {
    int N = 1;
    std::string name;
    uint32_t ref_mask = 0; // the lattice point the theory is normalized at
    std::map<uint32_t, Scalar> line_scale;
    std::map<std::pair<uint32_t, uint32_t>, Scalar> trans;

    LatticeSubspace reference() const { return LatticeSubspace::from_mask(WindowSpace(N), ref_mask); }
    const Scalar& transition(const LatticeSubspace& u1, const LatticeSubspace& u2) const;
    const Scalar& scale(const LatticeSubspace& u) const;
    bool operator==(const DetTheory& o) const { return N == o.N && line_scale == o.line_scale && trans == o.trans; }
};

// Haar theory: same shape, transitions strictly positive.
struct HaarTheory {
    int N = 1;
    std::string name;
    std::map<uint32_t, Scalar> line_scale;
    std::map<std::pair<uint32_t, uint32_t>, Scalar> trans;

    const Scalar& transition(const LatticeSubspace& u1, const LatticeSubspace& u2) const;
    void validate_positive() const;
    bool operator==(const HaarTheory& o) const { return N == o.N && line_scale == o.line_scale && trans == o.trans; }
};

// Orientation theory: transitions in {+1, -1}.
struct OrientationTheory {
    int N = 1;
    std::string name;
    std::map<std::pair<uint32_t, uint32_t>, int> trans;

    int transition(const LatticeSubspace& u1, const LatticeSubspace& u2) const;
};

DetTheory canonical_det_theory(const WindowSpace& w, const LatticeSubspace& u_ref);
DetTheory det_dual(const DetTheory& d);
DetTheory det_product(const DetTheory& dsub, const DetTheory& dquot, const WindowSES& seq);
HaarTheory haar_from_det(const DetTheory& d);
OrientationTheory orientation_from_det(const DetTheory& d);
HaarTheory haar_dual(const HaarTheory& h);
HaarTheory unit_haar_theory(const WindowSpace& w, const std::string& name);

// Triple-coherence checks; return the offending triple if any.
std::optional<std::string> det_coherence_failure(const WindowSpace& w, const DetTheory& d);
std::optional<std::string> haar_coherence_failure(const WindowSpace& w, const HaarTheory& h);
std::optional<std::string> orientation_coherence_failure(const WindowSpace& w, const OrientationTheory& o);

// Isomorphism of two det theories normalized to 1 at U0: the family
// c(U) with c(U2) t(U1,U2) = t'(U1,U2) c(U1).  Returns the family when
// it exists and is consistent, nullopt otherwise.
std::optional<std::map<uint32_t, Scalar>> det_theory_hom(const WindowSpace& w, const DetTheory& a, const DetTheory& b);

struct GLElement {
    QMat g; // invertible window matrix; maps lattice points to commensurable subspaces

    explicit GLElement(QMat m);
};

// Discrepancy 2-cocycle of the central extension with comparisons
// normalized at U0 through the coordinate corner block: c(g1,g2) =
// det a(g1) det a(g2) / det a(g1 g2), a(g) the U0-corner of g.
Scalar central_cocycle(const WindowSpace& w, const GLElement& g1, const GLElement& g2, const DetTheory& d);

} // namespace semimeasure
