#include "semimeasure/polynomial.hpp"

#include <numeric>

namespace semimeasure {

Polynomial Polynomial::constant(const FinVec& space, const Scalar& c) {
    Polynomial p(space);
    p.add_term(std::vector<int>(space.dim(), 0), c);
    return p;
}

Polynomial Polynomial::variable(const FinVec& space, int i) {
    require(i >= 0 && i < space.dim(), "BadIndex", "variable index out of range");
    Polynomial p(space);
    std::vector<int> e(space.dim(), 0);
    e[i] = 1;
    p.add_term(e, Scalar::one());
    return p;
}

Polynomial Polynomial::linear(const FinVec& space, const std::vector<QQ>& coeffs) {
    require(static_cast<int>(coeffs.size()) == space.dim(), "BadIndex", "linear coefficient count mismatch");
    Polynomial p(space);
    for (int i = 0; i < space.dim(); ++i) {
        if (coeffs[i] == 0) continue;
        std::vector<int> e(space.dim(), 0);
        e[i] = 1;
        p.add_term(e, Scalar::of(coeffs[i]));
    }
    return p;
}

Polynomial Polynomial::monomial(const FinVec& space, std::vector<int> exp, const Scalar& c) {
    require(static_cast<int>(exp.size()) == space.dim(), "BadIndex", "exponent length mismatch");
    Polynomial p(space);
    p.add_term(exp, c);
    return p;
}

void Polynomial::add_term(const std::vector<int>& exp, const Scalar& c) {
    require(static_cast<int>(exp.size()) == space_.dim(), "BadIndex", "exponent length mismatch");
    if (c.is_zero()) return;
    auto it = terms_.find(exp);
    if (it == terms_.end()) {
        terms_.emplace(exp, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

int Polynomial::total_degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
    return d;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    require(space_ == o.space_, "SpaceMismatch", "polynomial sum across different spaces");
    Polynomial r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    require(space_ == o.space_, "SpaceMismatch", "polynomial difference across different spaces");
    Polynomial r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

Polynomial Polynomial::operator-() const {
    Polynomial r(space_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    require(space_ == o.space_, "SpaceMismatch", "polynomial product across different spaces");
    Polynomial r(space_);
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) {
            std::vector<int> e(e1.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
            r.add_term(e, c1 * c2);
        }
    return r;
}

Polynomial Polynomial::scaled(const Scalar& c) const {
    Polynomial r(space_);
    for (const auto& [e, t] : terms_) r.add_term(e, t * c);
    return r;
}

Polynomial Polynomial::partial(int var) const {
    Polynomial r(space_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        std::vector<int> d = e;
        --d[var];
        r.add_term(d, c * Scalar::of_int(e[var]));
    }
    return r;
}

Scalar Polynomial::eval(const std::vector<QQ>& point) const {
    require(static_cast<int>(point.size()) == space_.dim(), "BadIndex", "evaluation point length mismatch");
    Scalar s = Scalar::zero();
    for (const auto& [e, c] : terms_) {
        QQ m(1);
        for (size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < e[i]; ++k) m *= point[i];
        s += c * Scalar::of(m);
    }
    return s;
}

Scalar Polynomial::constant_term() const {
    std::vector<int> z(space_.dim(), 0);
    auto it = terms_.find(z);
    return it == terms_.end() ? Scalar::zero() : it->second;
}

Polynomial Polynomial::substitute(const FinVec& new_space, const std::vector<Polynomial>& images) const {
    require(static_cast<int>(images.size()) == space_.dim(), "BadIndex", "one image per variable required");
    for (const auto& im : images)
        require(im.space() == new_space, "SpaceMismatch", "substitution image on wrong space");
    Polynomial r(new_space);
    for (const auto& [e, c] : terms_) {
        Polynomial m = Polynomial::constant(new_space, c);
        for (size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < e[i]; ++k) m = m * images[i];
        r = r + m;
    }
    return r;
}

Polynomial Polynomial::parity_flip() const {
    Polynomial r(space_);
    for (const auto& [e, c] : terms_) {
        int deg = std::accumulate(e.begin(), e.end(), 0);
        r.add_term(e, (deg % 2) ? -c : c);
    }
    return r;
}

Polynomial Polynomial::pullback(const LinMap& m) const {
    require(m.target == space_, "SpaceMismatch", "pullback target mismatch");
    std::vector<Polynomial> images;
    images.reserve(space_.dim());
    for (int i = 0; i < space_.dim(); ++i) images.push_back(Polynomial::linear(m.source, m.mat.row(i)));
    return substitute(m.source, images);
}

} // namespace semimeasure
