#pragma once

#include <random>
#include <vector>

#include "semimeasure/measure.hpp"
#include "semimeasure/quadform.hpp"

namespace semimeasure::testing {

inline QQ random_rational(std::mt19937& rng, int num_range = 5, int den_range = 3) {
    std::uniform_int_distribution<int> num(-num_range, num_range);
    std::uniform_int_distribution<int> den(1, den_range);
    QQ q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

inline Scalar random_scalar(std::mt19937& rng) {
    static const long rads[] = {1, 2, 3, 5, 6};
    std::uniform_int_distribution<int> nterms(1, 3), radix(0, 4), sig(-2, 2), im(0, 1);
    Scalar s = Scalar::zero();
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
        QQ c = random_rational(rng);
        GaussQ g = im(rng) ? GaussQ(QQ(0), c) : GaussQ(c);
        s += Scalar::term(g, 2 * sig(rng), ZZ(rads[radix(rng)]));
    }
    return s;
}

inline QMat random_matrix(std::mt19937& rng, int rows, int cols, int range = 3) {
    std::uniform_int_distribution<int> d(-range, range);
    QMat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = d(rng);
    return m;
}

inline QMat random_invertible(std::mt19937& rng, int n, int range = 3) {
    while (true) {
        QMat m = random_matrix(rng, n, n, range);
        if (m.det() != 0) return m;
    }
}

// A^t A + I is positive definite for any rational A.
inline PosDefForm random_posdef(std::mt19937& rng, const FinVec& space, int range = 2) {
    QMat a = random_matrix(rng, space.dim(), space.dim(), range);
    QMat m = a.transpose() * a + QMat::identity(space.dim());
    return PosDefForm(SymBilForm(space, m));
}

inline LinMap random_surjection(std::mt19937& rng, const FinVec& from, const FinVec& to) {
    while (true) {
        QMat m = random_matrix(rng, to.dim(), from.dim(), 2);
        LinMap f(from, to, m);
        if (f.is_surjective()) return f;
    }
}

inline LinMap random_injection(std::mt19937& rng, const FinVec& from, const FinVec& to) {
    while (true) {
        QMat m = random_matrix(rng, to.dim(), from.dim(), 2);
        LinMap f(from, to, m);
        if (f.is_injective()) return f;
    }
}

inline Polynomial random_polynomial(std::mt19937& rng, const FinVec& space, int max_deg, int max_terms) {
    std::uniform_int_distribution<int> nterms(1, max_terms), expo(0, max_deg);
    Polynomial p(space);
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        std::vector<int> e(space.dim(), 0);
        int budget = max_deg;
        for (int i = 0; i < space.dim(); ++i) {
            std::uniform_int_distribution<int> pick(0, budget);
            e[i] = pick(rng);
            budget -= e[i];
        }
        QQ c = random_rational(rng, 4, 2);
        if (c == 0) c = 1;
        p.add_term(e, Scalar::of(c));
    }
    return p;
}

} // namespace semimeasure::testing
