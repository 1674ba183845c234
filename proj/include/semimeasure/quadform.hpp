#pragma once

#include "semimeasure/linalg.hpp"
#include "semimeasure/scalar.hpp"

namespace semimeasure {

struct SymBilForm {
    FinVec space;
    QMat mat;

    SymBilForm() = default;
    SymBilForm(FinVec s, QMat m);

    QQ eval(const std::vector<QQ>& x, const std::vector<QQ>& y) const;
    QQ quad(const std::vector<QQ>& x) const { return eval(x, x); }
    bool operator==(const SymBilForm& o) const { return space == o.space && mat == o.mat; }
};

// Exact Sylvester criterion: all leading principal minors positive.
bool is_positive_definite(const SymBilForm& b);

// Exact positive-semidefiniteness via pivoted symmetric elimination.
bool is_positive_semidefinite(const QMat& m);

// Positive definite form; the zero-dimensional space carries the unique
// empty form, positive definite by convention.
struct PosDefForm {
    SymBilForm b;

    PosDefForm() = default;
    explicit PosDefForm(SymBilForm form);
    static PosDefForm standard(const FinVec& space) { return PosDefForm(SymBilForm(space, QMat::identity(space.dim()))); }

    const FinVec& space() const { return b.space; }
    const QMat& mat() const { return b.mat; }
    int dim() const { return b.space.dim(); }
    bool operator==(const PosDefForm& o) const { return b == o.b; }
    bool operator!=(const PosDefForm& o) const { return !(*this == o); }
};

// Haar volume element: a positive multiple of the coordinate Lebesgue
// basis of |det(space)^*|, identified by the space's basis labels.
struct HaarVolume {
    std::string line; // "|det(l1,l2,...)^*|"
    Scalar coeff;
};

std::string haar_line_of(const FinVec& space);
std::string haar_line_of_labels(const std::vector<std::string>& labels);

// alpha^* b for an injection alpha; positive definiteness is inherited.
PosDefForm restrict_form(const PosDefForm& b, const LinMap& alpha);

// beta_* b for a surjection beta, computed as the Schur complement of
// the kernel block; q_{beta_* b}(w) is the minimum of q_b over the fiber.
PosDefForm pushforward_form(const PosDefForm& b, const LinMap& beta);

// The same pushforward through the inverse-restrict-invert composition;
// kept separate so audits can compare the two routes exactly.
PosDefForm pushforward_form_via_inverse(const PosDefForm& b, const LinMap& beta);

// Exact inverse form on the dual space.
PosDefForm inverse_form(const PosDefForm& b);

// Coefficient sqrt(det b) on the coordinate Lebesgue basis; the volume
// element assigning measure 1 to each b-orthocube.
HaarVolume induced_haar(const PosDefForm& b);

// Basis of the b-orthogonal complement of the image of an injection,
// normalized so that the quotient projection sends it to the cokernel's
// coordinate basis.  Returns the complement columns and its Gram matrix.
std::pair<QMat, QMat> orthocomplement_sections(const PosDefForm& b, const LinMap& alpha);

// Section of a surjection through the b-orthogonal complement of the
// kernel: returns (kernel basis K, section S) with beta*S = id and
// columns of S b-orthogonal to those of K.
std::pair<QMat, QMat> orthogonal_splitting(const PosDefForm& b, const LinMap& beta);

} // namespace semimeasure
