#include "semimeasure/measure.hpp"

#include <algorithm>
#include <map>

namespace semimeasure {

std::vector<HaarTag> normalize_tags(std::vector<HaarTag> tags) {
    std::sort(tags.begin(), tags.end());
    return tags;
}

AlmostGaussianMeasure::AlmostGaussianMeasure(PosDefForm form, Polynomial poly, std::vector<HaarTag> t)
    : space(form.space()), q(std::move(form)), p(std::move(poly)), tags(normalize_tags(std::move(t))) {
    require(p.space() == space, "SpaceMismatch", "polynomial lives on a different space than the form");
}

AlmostGaussianMeasure AlmostGaussianMeasure::gaussian(const PosDefForm& form) {
    return AlmostGaussianMeasure(form, Polynomial::one(form.space()));
}

AlmostGaussianMeasure AlmostGaussianMeasure::scaled(const Scalar& c) const {
    return AlmostGaussianMeasure(q, p.scaled(c), tags);
}

AlmostGaussianMeasure AlmostGaussianMeasure::operator+(const AlmostGaussianMeasure& o) const {
    require(q == o.q, "FormMismatch", "sum of measures with different Gaussian forms");
    require(normalize_tags(tags) == normalize_tags(o.tags), "TagMismatch", "sum of measures with different tags");
    return AlmostGaussianMeasure(q, p + o.p, tags);
}

bool AlmostGaussianMeasure::operator==(const AlmostGaussianMeasure& o) const {
    if (p.is_zero() && o.p.is_zero()) return space == o.space;
    return space == o.space && q == o.q && p == o.p && tags == o.tags;
}

QQ isserlis_moment(const QMat& cov, const std::vector<int>& exponent) {
    std::vector<int> idx;
    for (size_t i = 0; i < exponent.size(); ++i) {
        require(exponent[i] >= 0, "BadIndex", "negative exponent");
        for (int k = 0; k < exponent[i]; ++k) idx.push_back(static_cast<int>(i));
    }
    if (idx.size() % 2) return QQ(0);
    // Sum over perfect matchings: pair the first index with each later
    // one and recurse on the rest.
    std::function<QQ(std::vector<int>&)> go = [&](std::vector<int>& v) -> QQ {
        if (v.empty()) return QQ(1);
        int a = v[0];
        QQ total(0);
        for (size_t k = 1; k < v.size(); ++k) {
            int b = v[k];
            if (cov.at(a, b) == 0) continue;
            std::vector<int> rest;
            rest.reserve(v.size() - 2);
            for (size_t t = 1; t < v.size(); ++t)
                if (t != k) rest.push_back(v[t]);
            total += cov.at(a, b) * go(rest);
        }
        return total;
    };
    return go(idx);
}

Scalar AlmostGaussianMeasure::moment(const std::vector<int>& exponent) const {
    require(static_cast<int>(exponent.size()) == space.dim(), "BadIndex", "moment exponent length mismatch");
    QMat cov = space.dim() == 0 ? QMat(0, 0) : q.mat().inverse();
    Scalar total = Scalar::zero();
    for (const auto& [e, c] : p.terms()) {
        std::vector<int> full(e.size());
        for (size_t i = 0; i < e.size(); ++i) full[i] = e[i] + exponent[i];
        total += c * Scalar::of(isserlis_moment(cov, full));
    }
    return total;
}

Scalar integrate(const AlmostGaussianMeasure& mu) {
    require(mu.tags.empty(), "TaggedMeasure", "cannot integrate a measure with undischarged tags");
    return mu.moment(std::vector<int>(mu.space.dim(), 0));
}

AlmostGaussianMeasure pushforward_measure(const AlmostGaussianMeasure& mu, const LinMap& beta) {
    require(beta.source == mu.space, "SpaceMismatch", "pushforward source mismatch");
    auto [K, S] = orthogonal_splitting(mu.q, beta); // throws NotSurjective
    int k = K.cols(), m = beta.target.dim();
    PosDefForm qpush = pushforward_form(mu.q, beta);
    // x = K u + S w splits q orthogonally; integrate the u-variables by
    // Isserlis with covariance (K^t B K)^{-1}, no mean term.
    FinVec mixed("split(" + mu.space.name + ")", [&] {
        std::vector<std::string> labels;
        for (int i = 0; i < k; ++i) labels.push_back("u" + std::to_string(i));
        for (const auto& b : beta.target.basis) labels.push_back(b);
        return labels;
    }());
    std::vector<Polynomial> images;
    images.reserve(mu.space.dim());
    for (int i = 0; i < mu.space.dim(); ++i) {
        std::vector<QQ> coeffs(k + m, QQ(0));
        for (int a = 0; a < k; ++a) coeffs[a] = K.at(i, a);
        for (int b = 0; b < m; ++b) coeffs[k + b] = S.at(i, b);
        images.push_back(Polynomial::linear(mixed, coeffs));
    }
    Polynomial mixed_p = mu.p.substitute(mixed, images);
    QMat fiber_cov = k == 0 ? QMat(0, 0) : (K.transpose() * mu.q.mat() * K).inverse();
    Polynomial out(beta.target);
    for (const auto& [e, c] : mixed_p.terms()) {
        std::vector<int> ue(e.begin(), e.begin() + k);
        std::vector<int> we(e.begin() + k, e.end());
        QQ mom = isserlis_moment(fiber_cov, ue);
        if (mom == 0) continue;
        out.add_term(we, c * Scalar::of(mom));
    }
    return AlmostGaussianMeasure(qpush, out, mu.tags);
}

AlmostGaussianMeasure pullback_measure(const AlmostGaussianMeasure& mu, const LinMap& alpha) {
    require(alpha.target == mu.space, "SpaceMismatch", "pullback target mismatch");
    require(alpha.is_injective(), "NotInjective", "pullback along a non-injective map");
    PosDefForm qres = restrict_form(mu.q, alpha);
    Polynomial pres = mu.p.pullback(alpha);
    std::vector<HaarTag> tags = mu.tags;
    auto labels = cokernel_complement_labels(alpha);
    if (!labels.empty()) {
        auto [N, G] = orthocomplement_sections(mu.q, alpha);
        tags.push_back(HaarTag{haar_line_of_labels(labels), 1, Scalar::sqrt_rational(G.det())});
    }
    return AlmostGaussianMeasure(qres, pres, std::move(tags));
}

AGFunction fourier(const AlmostGaussianMeasure& mu) {
    require(mu.tags.empty(), "TaggedMeasure", "Fourier transform of a tagged measure");
    FinVec dual = dual_space(mu.space);
    PosDefForm qinv = inverse_form(mu.q);
    QMat covq = mu.space.dim() == 0 ? QMat(0, 0) : mu.q.mat().inverse();
    Polynomial out(dual);
    Scalar minus_i = -Scalar::imag_unit();
    for (const auto& [e, c] : mu.p.terms()) {
        Polynomial acc = Polynomial::one(dual);
        for (size_t j = 0; j < e.size(); ++j) {
            std::vector<QQ> row = covq.row(static_cast<int>(j));
            Polynomial ell = Polynomial::linear(dual, row);
            for (int rep = 0; rep < e[j]; ++rep)
                acc = (acc.partial(static_cast<int>(j)) - acc * ell).scaled(minus_i);
        }
        out = out + acc.scaled(c);
    }
    return AGFunction{dual, qinv, out};
}

AlmostGaussianMeasure function_to_measure(const AGFunction& f) {
    return AlmostGaussianMeasure(f.q, f.p);
}

HeisenbergOp HeisenbergOp::vector_op(const std::vector<QQ>& v) {
    return HeisenbergOp{{{Scalar::one(), {Gen{true, v}}}}};
}

HeisenbergOp HeisenbergOp::covector_op(const std::vector<QQ>& f) {
    return HeisenbergOp{{{Scalar::one(), {Gen{false, f}}}}};
}

HeisenbergOp HeisenbergOp::then(const HeisenbergOp& next) const {
    HeisenbergOp r;
    for (const auto& [c1, w1] : words)
        for (const auto& [c2, w2] : next.words) {
            Word w = w1;
            w.insert(w.end(), w2.begin(), w2.end());
            r.words.emplace_back(c1 * c2, std::move(w));
        }
    return r;
}

HeisenbergOp HeisenbergOp::operator+(const HeisenbergOp& o) const {
    HeisenbergOp r = *this;
    r.words.insert(r.words.end(), o.words.begin(), o.words.end());
    return r;
}

HeisenbergOp HeisenbergOp::scaled(const Scalar& c) const {
    HeisenbergOp r = *this;
    for (auto& [coef, w] : r.words) coef = coef * c;
    return r;
}

HeisenbergOp HeisenbergOp::commutator(const HeisenbergOp& a, const HeisenbergOp& b) {
    return a.then(b) + b.then(a).scaled(-Scalar::one());
}

namespace {

AlmostGaussianMeasure apply_gen(const HeisenbergOp::Gen& g, const AlmostGaussianMeasure& mu) {
    require(static_cast<int>(g.coeffs.size()) == mu.space.dim(), "SpaceMismatch",
            "Heisenberg generator on the wrong space");
    if (g.is_vector) {
        // derivative of the density along the constant field v:
        // L_v(p gamma_q) = (d_v p - b(v, x) p) gamma_q
        Polynomial dp(mu.space);
        for (int i = 0; i < mu.space.dim(); ++i)
            if (g.coeffs[i] != 0) dp = dp + mu.p.partial(i).scaled(Scalar::of(g.coeffs[i]));
        std::vector<QQ> bv = mu.q.mat().apply(g.coeffs);
        Polynomial lin = Polynomial::linear(mu.space, bv);
        return AlmostGaussianMeasure(mu.q, dp - lin * mu.p, mu.tags);
    }
    Polynomial lin = Polynomial::linear(mu.space, g.coeffs);
    return AlmostGaussianMeasure(mu.q, lin * mu.p, mu.tags);
}

} // namespace

AlmostGaussianMeasure apply_heisenberg(const HeisenbergOp& op, const AlmostGaussianMeasure& mu) {
    AlmostGaussianMeasure total(mu.q, Polynomial(mu.space), mu.tags);
    for (const auto& [c, word] : op.words) {
        AlmostGaussianMeasure cur = mu;
        for (const auto& g : word) cur = apply_gen(g, cur);
        total = total + cur.scaled(c);
    }
    return total;
}

void DeskDistribution::validate() const {
    require(support.is_injective(), "NotInjective", "distribution support must be an injection");
    require(density_poly.space() == support.source, "SpaceMismatch", "density polynomial on the wrong space");
    require(density_form.rows() == support.source.dim() && density_form.cols() == support.source.dim(),
            "BadMatrix", "density form shape mismatch");
    require(is_positive_semidefinite(density_form), "NotPositiveSemidefinite",
            "density form must be positive semidefinite");
}

Scalar pair_distribution(const DeskDistribution& phi, const AlmostGaussianMeasure& mu) {
    phi.validate();
    require(phi.support.target == mu.space, "SpaceMismatch", "distribution and measure live on different spaces");
    const LinMap& iota = phi.support;
    PosDefForm qres = restrict_form(mu.q, iota);
    Polynomial pres = mu.p.pullback(iota);

    // Bare restriction: relative to the normalized pullback this carries
    // sigma^{-codim} sqrt(det G) on the cokernel's Lebesgue line.
    std::vector<HaarTag> all = mu.tags;
    for (const auto& t : phi.tags) all.push_back(t);
    auto labels = cokernel_complement_labels(iota);
    if (!labels.empty()) {
        auto [N, G] = orthocomplement_sections(mu.q, iota);
        Scalar coeff = Scalar::sigma_pow(-2 * static_cast<int>(labels.size())) * Scalar::sqrt_rational(G.det());
        all.push_back(HaarTag{haar_line_of_labels(labels), 1, coeff});
    }

    // Lines must cancel exactly.
    std::map<std::string, int> powers;
    Scalar tag_coeff = Scalar::one();
    for (const auto& t : all) {
        powers[t.line] += t.power;
        tag_coeff = tag_coeff * t.coeff;
    }
    for (const auto& [line, pw] : powers)
        require(pw == 0, "TagMismatch", "line " + line + " does not cancel in the pairing");

    // density * restricted measure: the Gaussian factors combine into
    // gamma_{q_phi + q'} with a sqrt(det q'/det(q_phi + q')) rescale.
    QMat bsum = phi.density_form + qres.mat();
    PosDefForm qsum(SymBilForm(iota.source, bsum));
    AlmostGaussianMeasure prod(qsum, phi.density_poly * pres);
    Scalar rescale = Scalar::sqrt_rational(iota.source.dim() == 0 ? QQ(1) : qres.mat().det() / bsum.det());
    return integrate(prod) * rescale * tag_coeff;
}

DeskDistribution distribution_pushforward(const DeskDistribution& phi, const LinMap& alpha) {
    require(alpha.is_injective(), "NotInjective", "distribution pushforward along a non-injective map");
    require(alpha.source == phi.support.target, "SpaceMismatch", "pushforward source mismatch");
    DeskDistribution out = phi;
    out.support = alpha.compose(phi.support);
    return out;
}

} // namespace semimeasure
