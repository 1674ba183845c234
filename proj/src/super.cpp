#include "semimeasure/super.hpp"

#include <algorithm>

namespace semimeasure {

SuperVec::SuperVec(FinVec e, FinVec o) : even(std::move(e)), odd(std::move(o)) {
    for (const auto& l : even.basis)
        require(std::find(odd.basis.begin(), odd.basis.end(), l) == odd.basis.end(), "DuplicateLabel",
                "even and odd labels must be disjoint");
}

ExteriorElement ExteriorElement::unit(const FinVec& gens) {
    ExteriorElement e(gens);
    e.add_term({}, Scalar::one());
    return e;
}

ExteriorElement ExteriorElement::generator(const FinVec& gens, int i) {
    require(i >= 0 && i < gens.dim(), "BadIndex", "generator index out of range");
    ExteriorElement e(gens);
    e.add_term({i}, Scalar::one());
    return e;
}

ExteriorElement ExteriorElement::monomial(const FinVec& gens, std::vector<int> idx, const Scalar& c) {
    ExteriorElement e(gens);
    e.add_term(std::move(idx), c);
    return e;
}

void ExteriorElement::add_term(std::vector<int> idx, const Scalar& c) {
    if (c.is_zero()) return;
    // insertion sort, counting transpositions; repeated index kills the term
    int swaps = 0;
    for (size_t i = 1; i < idx.size(); ++i)
        for (size_t j = i; j > 0 && idx[j] < idx[j - 1]; --j) {
            std::swap(idx[j], idx[j - 1]);
            ++swaps;
        }
    for (size_t i = 0; i + 1 < idx.size(); ++i)
        if (idx[i] == idx[i + 1]) return;
    for (int k : idx) require(k >= 0 && k < gens_.dim(), "BadIndex", "generator index out of range");
    Scalar signed_c = (swaps % 2) ? -c : c;
    auto it = terms_.find(idx);
    if (it == terms_.end()) {
        terms_.emplace(std::move(idx), signed_c);
    } else {
        it->second += signed_c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

int ExteriorElement::top_degree() const {
    int d = 0;
    for (const auto& [s, c] : terms_) d = std::max(d, static_cast<int>(s.size()));
    return d;
}

ExteriorElement ExteriorElement::operator+(const ExteriorElement& o) const {
    require(gens_ == o.gens_, "SpaceMismatch", "exterior sum across different generator sets");
    ExteriorElement r = *this;
    for (const auto& [s, c] : o.terms_) r.add_term(s, c);
    return r;
}

ExteriorElement ExteriorElement::operator-(const ExteriorElement& o) const {
    return *this + o.scaled(-Scalar::one());
}

ExteriorElement ExteriorElement::wedge(const ExteriorElement& o) const {
    require(gens_ == o.gens_, "SpaceMismatch", "wedge across different generator sets");
    ExteriorElement r(gens_);
    for (const auto& [s1, c1] : terms_)
        for (const auto& [s2, c2] : o.terms_) {
            std::vector<int> s = s1;
            s.insert(s.end(), s2.begin(), s2.end());
            r.add_term(std::move(s), c1 * c2);
        }
    return r;
}

ExteriorElement ExteriorElement::scaled(const Scalar& c) const {
    ExteriorElement r(gens_);
    for (const auto& [s, t] : terms_) {
        Scalar sc = t * c;
        if (!sc.is_zero()) r.terms_.emplace(s, sc);
    }
    return r;
}

Scalar ExteriorElement::top_coefficient() const {
    std::vector<int> top(gens_.dim());
    for (int i = 0; i < gens_.dim(); ++i) top[i] = i;
    auto it = terms_.find(top);
    return it == terms_.end() ? Scalar::zero() : it->second;
}

ExteriorElement ExteriorElement::left_derivative(int k) const {
    ExteriorElement r(gens_);
    for (const auto& [s, c] : terms_) {
        auto it = std::find(s.begin(), s.end(), k);
        if (it == s.end()) continue;
        int pos = static_cast<int>(it - s.begin());
        std::vector<int> rest;
        rest.reserve(s.size() - 1);
        for (int x : s)
            if (x != k) rest.push_back(x);
        r.add_term(std::move(rest), (pos % 2) ? -c : c);
    }
    return r;
}

ExteriorElement ExteriorElement::substitute(const FinVec& new_gens,
                                            const std::vector<ExteriorElement>& images) const {
    require(static_cast<int>(images.size()) == gens_.dim(), "BadIndex", "one image per generator required");
    ExteriorElement r(new_gens);
    for (const auto& [s, c] : terms_) {
        ExteriorElement acc = ExteriorElement::unit(new_gens).scaled(c);
        for (int k : s) acc = acc.wedge(images[k]);
        r = r + acc;
    }
    return r;
}

SuperMeasure::SuperMeasure(SuperVec sp, AlmostGaussianMeasure even, ExteriorElement odd, Scalar mu)
    : space(std::move(sp)), even_part(std::move(even)), odd_part(std::move(odd)), mu_coeff(std::move(mu)) {
    require(even_part.space == space.even, "SpaceMismatch", "even part lives on the wrong space");
    require(odd_part.gens() == space.odd, "SpaceMismatch", "odd part has the wrong generators");
}

bool SuperMeasure::operator==(const SuperMeasure& o) const {
    bool zero_a = even_part.is_zero() || odd_part.is_zero();
    bool zero_b = o.even_part.is_zero() || o.odd_part.is_zero();
    if (zero_a && zero_b) return space == o.space;
    // the measure is the tensor odd_part (x) mu-line element, so compare
    // the product, not the split
    return space == o.space && even_part == o.even_part &&
           odd_part.scaled(mu_coeff) == o.odd_part.scaled(o.mu_coeff) &&
           normalize_tags(tags) == normalize_tags(o.tags) && z2_grade % 2 == o.z2_grade % 2;
}

SuperLinMap SuperLinMap::from_block(const SuperVec& src, const SuperVec& dst, const QMat& block) {
    int se = src.even.dim(), so = src.odd.dim();
    int de = dst.even.dim(), dn = dst.odd.dim();
    require(block.rows() == de + dn && block.cols() == se + so, "BadMatrix", "block matrix shape mismatch");
    for (int i = 0; i < de; ++i)
        for (int j = 0; j < so; ++j)
            require(block.at(i, se + j) == 0, "ParityViolation", "even-odd block is nonzero");
    for (int i = 0; i < dn; ++i)
        for (int j = 0; j < se; ++j)
            require(block.at(de + i, j) == 0, "ParityViolation", "odd-even block is nonzero");
    std::vector<int> re(de), ro(dn), ce(se), co(so);
    for (int i = 0; i < de; ++i) re[i] = i;
    for (int i = 0; i < dn; ++i) ro[i] = de + i;
    for (int j = 0; j < se; ++j) ce[j] = j;
    for (int j = 0; j < so; ++j) co[j] = se + j;
    return SuperLinMap{LinMap(src.even, dst.even, block.submatrix(re, ce)),
                       LinMap(src.odd, dst.odd, block.submatrix(ro, co))};
}

Scalar berezin_integrate(const SuperMeasure& m) {
    require(m.tags.empty(), "TaggedMeasure", "cannot integrate a tagged super measure");
    return integrate(m.even_part) * m.odd_part.top_coefficient() * m.mu_coeff;
}

namespace {

// Section of a surjection through coordinate pivots: beta * S = id.
QMat plain_section(const QMat& beta) {
    QMat rr = beta;
    auto pivots = rr.rref();
    QMat c(beta.cols(), static_cast<int>(pivots.size()));
    for (size_t k = 0; k < pivots.size(); ++k) c.at(pivots[k], static_cast<int>(k)) = 1;
    QMat l = beta * c;
    return c * l.inverse();
}

} // namespace

SuperMeasure super_pushforward(const SuperMeasure& m, const SuperLinMap& beta) {
    require(beta.even.source == m.space.even && beta.odd.source == m.space.odd, "SpaceMismatch",
            "pushforward source mismatch");
    require(beta.odd.is_surjective(), "NotSurjective", "odd part of the surjection has a cokernel");
    AlmostGaussianMeasure even = pushforward_measure(m.even_part, beta.even);

    // Odd fiber: rewrite the generators in the kernel-adapted frame
    // [K | S], Berezin-project the full kernel block, read the base
    // block through the section (base coordinates are the target's).
    int n = m.space.odd.dim(), mdim = beta.odd.target.dim();
    QMat K = beta.odd.mat.kernel_basis();
    int k = K.cols();
    QMat S = mdim == 0 ? QMat(n, 0) : plain_section(beta.odd.mat);
    QMat frame = K.hcat(S);
    SuperVec target_space(beta.even.target, beta.odd.target);
    FinVec mixed("oddsplit", [&] {
        std::vector<std::string> l;
        for (int i = 0; i < k; ++i) l.push_back("u" + std::to_string(i));
        for (const auto& b : beta.odd.target.basis) l.push_back(b);
        return l;
    }());
    std::vector<ExteriorElement> images;
    images.reserve(n);
    QMat frame_inv = k + mdim == n ? frame.inverse() : QMat(0, 0);
    require(k + mdim == n, "NotSurjective", "odd splitting failed");
    for (int i = 0; i < n; ++i) {
        // theta_i = sum_j frame_{i j} theta'_j
        ExteriorElement img(mixed);
        for (int j = 0; j < n; ++j)
            if (frame.at(i, j) != 0) img = img + ExteriorElement::generator(mixed, j).scaled(Scalar::of(frame.at(i, j)));
        images.push_back(img);
    }
    ExteriorElement rewritten = m.odd_part.substitute(mixed, images);
    ExteriorElement out(beta.odd.target);
    for (const auto& [s, c] : rewritten.terms()) {
        // keep terms containing the full fiber block u_0..u_{k-1}
        bool full = true;
        for (int i = 0; i < k; ++i)
            if (!std::binary_search(s.begin(), s.end(), i)) { full = false; break; }
        if (!full) continue;
        if (static_cast<int>(s.size()) < k) continue;
        std::vector<int> base;
        for (int x : s)
            if (x >= k) base.push_back(x - k);
        if (static_cast<int>(base.size()) + k != static_cast<int>(s.size())) continue;
        out.add_term(std::move(base), c);
    }
    Scalar mu = m.mu_coeff * Scalar::of(frame.det()).inverse();
    SuperMeasure r(target_space, even, out, mu);
    r.tags = m.tags;
    r.z2_grade = m.z2_grade;
    return r;
}

SuperMeasure super_pullback(const SuperMeasure& m, const SuperLinMap& alpha) {
    require(alpha.even.target == m.space.even && alpha.odd.target == m.space.odd, "SpaceMismatch",
            "pullback target mismatch");
    require(alpha.odd.is_injective(), "NotInjective", "odd part of the injection is degenerate");
    AlmostGaussianMeasure even = pullback_measure(m.even_part, alpha.even);
    std::vector<HaarTag> tags = even.tags;
    even.tags.clear();

    // Restrict the odd function: theta_i pulls back to the i-th row of
    // the inclusion matrix.
    std::vector<ExteriorElement> images;
    images.reserve(m.space.odd.dim());
    for (int i = 0; i < m.space.odd.dim(); ++i) {
        ExteriorElement img(alpha.odd.source);
        for (int j = 0; j < alpha.odd.source.dim(); ++j)
            if (alpha.odd.mat.at(i, j) != 0)
                img = img + ExteriorElement::generator(alpha.odd.source, j).scaled(Scalar::of(alpha.odd.mat.at(i, j)));
        images.push_back(img);
    }
    ExteriorElement odd = m.odd_part.substitute(alpha.odd.source, images);

    // det(odd) factor splits through the chosen cokernel lifts.
    Scalar mu = m.mu_coeff;
    auto labels = cokernel_complement_labels(alpha.odd);
    if (!labels.empty()) {
        QMat lifts(m.space.odd.dim(), static_cast<int>(labels.size()));
        for (size_t c = 0; c < labels.size(); ++c) {
            auto it = std::find(m.space.odd.basis.begin(), m.space.odd.basis.end(), labels[c]);
            lifts.at(static_cast<int>(it - m.space.odd.basis.begin()), static_cast<int>(c)) = 1;
        }
        QQ det_split = alpha.odd.mat.hcat(lifts).det();
        mu = mu * Scalar::of(det_split).inverse();
        std::string line = "det(";
        for (size_t i = 0; i < labels.size(); ++i) line += (i ? "," : "") + labels[i];
        line += ")";
        tags.push_back(HaarTag{line, 1, Scalar::one()});
    }
    SuperMeasure r(SuperVec(alpha.even.source, alpha.odd.source), even, odd, mu);
    r.tags = normalize_tags(tags);
    r.z2_grade = m.z2_grade;
    return r;
}

WedgeVector WedgeVector::vacuum(const WindowSpace& w, int charge) {
    require(charge >= -w.N && charge <= w.N, "IndexOutsideWindow", "vacuum charge outside the window");
    std::set<int> s;
    for (int i = -w.N; i < charge; ++i) s.insert(i);
    return monomial(w, std::move(s), Scalar::one());
}

WedgeVector WedgeVector::monomial(const WindowSpace& w, std::set<int> s, const Scalar& c) {
    WedgeVector v;
    v.N = w.N;
    for (int i : s)
        require(i >= w.lo() && i < w.hi(), "IndexOutsideWindow", "monomial index outside the window");
    v.add_term(s, c);
    return v;
}

void WedgeVector::add_term(const std::set<int>& s, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = terms.find(s);
    if (it == terms.end()) {
        terms.emplace(s, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }
}

WedgeVector WedgeVector::operator+(const WedgeVector& o) const {
    require(N == o.N, "SpaceMismatch", "wedge sum across windows");
    WedgeVector r = *this;
    for (const auto& [s, c] : o.terms) r.add_term(s, c);
    return r;
}

WedgeVector WedgeVector::scaled(const Scalar& c) const {
    WedgeVector r;
    r.N = N;
    for (const auto& [s, t] : terms) {
        Scalar sc = t * c;
        if (!sc.is_zero()) r.terms.emplace(s, sc);
    }
    return r;
}

long wedge_charge(int N, const std::set<int>& s) { return static_cast<long>(s.size()) - N; }

std::pair<long, std::set<int>> maya_encoding(int N, const std::set<int>& s) {
    long charge = wedge_charge(N, s);
    std::set<int> vac;
    for (long i = -N; i < charge; ++i) vac.insert(static_cast<int>(i));
    std::set<int> exc;
    std::set_symmetric_difference(s.begin(), s.end(), vac.begin(), vac.end(), std::inserter(exc, exc.begin()));
    return {charge, exc};
}

std::set<int> maya_decoding(int N, long charge, const std::set<int>& excitations) {
    std::set<int> s;
    for (long i = -N; i < charge; ++i) s.insert(static_cast<int>(i));
    for (int e : excitations) {
        if (s.count(e)) s.erase(e);
        else s.insert(e);
    }
    return s;
}

WedgeVector wedge_transition(const WedgeVector& v, const LatticeSubspace& from_u,
                             const LatticeSubspace& to_u, const DetTheory& theory) {
    require(from_u.leq(to_u), "NotNested", "transition requires from_U <= to_U");
    require(v.N == from_u.N && theory.N == from_u.N, "SpaceMismatch", "transition across windows");
    std::vector<int> gap = gap_indices(from_u, to_u);
    Scalar t = theory.transition(from_u, to_u);
    // insertion normalization: count reference elements above the gap
    int psi = 0;
    for (int a : gap)
        for (int s : from_u.idx)
            if (a < s) ++psi;
    WedgeVector r;
    r.N = v.N;
    for (const auto& [mono, c] : v.terms) {
        bool overlap = false;
        for (int a : gap)
            if (mono.count(a)) { overlap = true; break; }
        if (overlap) continue; // the wedge with an occupied index vanishes
        // left-wedge the gap in decreasing order onto the decreasing monomial
        int inversions = 0;
        for (int a : gap)
            for (int mi : mono)
                if (a < mi) ++inversions;
        std::set<int> merged = mono;
        merged.insert(gap.begin(), gap.end());
        Scalar sign = ((psi + inversions) % 2) ? -Scalar::one() : Scalar::one();
        r.add_term(merged, c * sign * t);
    }
    return r;
}

WedgeVector clifford_action(CliffordKind kind, int index, const WedgeVector& v) {
    require(index >= -v.N && index < v.N, "IndexOutsideWindow", "Clifford index outside the window");
    WedgeVector r;
    r.N = v.N;
    for (const auto& [mono, c] : v.terms) {
        int above = 0;
        for (int mi : mono)
            if (mi > index) ++above;
        Scalar sign = (above % 2) ? -Scalar::one() : Scalar::one();
        if (kind == CliffordKind::Create) {
            if (mono.count(index)) continue;
            std::set<int> s = mono;
            s.insert(index);
            r.add_term(s, c * sign);
        } else {
            if (!mono.count(index)) continue;
            std::set<int> s = mono;
            s.erase(index);
            r.add_term(s, c * sign);
        }
    }
    return r;
}

} // namespace semimeasure
