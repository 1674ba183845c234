#pragma once

#include <string>
#include <utility>
#include <vector>

#include "semimeasure/rational.hpp"

namespace semimeasure {

// Finite-dimensional space with a named ordered basis.  Equality is
// structural (same basis labels in the same order); the name is for
// display and workspace bookkeeping.
struct FinVec {
    std::string name;
    std::vector<std::string> basis;

    FinVec() = default;
    FinVec(std::string n, std::vector<std::string> b);

    int dim() const { return static_cast<int>(basis.size()); }
    bool operator==(const FinVec& o) const { return basis == o.basis; }
    bool operator!=(const FinVec& o) const { return !(*this == o); }

    static FinVec coordinate(const std::string& name, int dim, const std::string& stem = "x");
};

// Dual space with starred labels, in the dual-basis order.
FinVec dual_space(const FinVec& v);

struct LinMap {
    FinVec source, target;
    QMat mat; // target.dim x source.dim

    LinMap() = default;
    LinMap(FinVec s, FinVec t, QMat m);

    static LinMap identity(const FinVec& v);
    static LinMap zero(const FinVec& s, const FinVec& t) { return LinMap(s, t, QMat(t.dim(), s.dim())); }

    LinMap compose(const LinMap& first) const; // (*this) o first
    bool is_injective() const { return mat.rank() == source.dim(); }
    bool is_surjective() const { return mat.rank() == target.dim(); }
    bool is_iso() const { return source.dim() == target.dim() && is_injective(); }
    LinMap inverse() const;
    bool operator==(const LinMap& o) const { return source == o.source && target == o.target && mat == o.mat; }
};

// Kernel subspace with its injection into the source.
std::pair<FinVec, LinMap> kernel(const LinMap& m);

// Quotient of the target by the image.  The quotient basis is the
// lexicographically earliest complement of the image's pivot
// coordinates, so cokernel bases are deterministic.  Returns the
// quotient space and the projection map.
std::pair<FinVec, LinMap> cokernel(const LinMap& m);

// Labels of the target coordinates chosen as the cokernel complement.
std::vector<std::string> cokernel_complement_labels(const LinMap& m);

LinMap dual_map(const LinMap& m);

struct ShortExactSeq {
    LinMap alpha; // injection V' -> V
    LinMap beta;  // surjection V -> V''

    void validate() const; // exact checks; throws NotExact on failure
};

// Pullback square with injections alpha_1, alpha_2 and surjections
// beta_1, beta_2:
//
//        W   --alpha2-->  W1
//      beta2|              |beta1
//        W2  --alpha1-->  W12
struct CartesianSquare {
    FinVec W, W1, W2, W12;
    LinMap alpha2; // W  -> W1
    LinMap beta2;  // W  -> W2
    LinMap beta1;  // W1 -> W12
    LinMap alpha1; // W2 -> W12
};

bool check_cartesian(const CartesianSquare& sq);

// The pullback of beta1 along alpha1: W = W1 x_{W12} W2 with canonical
// coordinate construction; used by tests and audits to generate squares.
CartesianSquare pullback_square(const LinMap& beta1, const LinMap& alpha1);

} // namespace semimeasure
