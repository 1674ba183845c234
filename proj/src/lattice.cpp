#include "semimeasure/lattice.hpp"

#include <algorithm>
#include <sstream>

namespace semimeasure {

FinVec WindowSpace::space() const {
    std::vector<std::string> labels;
    labels.reserve(dim());
    for (int i = lo(); i < hi(); ++i) labels.push_back(label(i));
    return FinVec("R((t))|" + std::to_string(N), labels);
}

LatticeSubspace::LatticeSubspace(const WindowSpace& w, std::set<int> s) : N(w.N), idx(std::move(s)) {
    for (int i : idx)
        require(i >= w.lo() && i < w.hi(), "IndexOutsideWindow",
                "lattice index " + std::to_string(i) + " outside window " + std::to_string(N));
}

LatticeSubspace LatticeSubspace::from_mask(const WindowSpace& w, uint32_t mask) {
    std::set<int> s;
    for (int k = 0; k < w.dim(); ++k)
        if (mask & (1u << k)) s.insert(k - w.N);
    return LatticeSubspace(w, std::move(s));
}

LatticeSubspace LatticeSubspace::reference(const WindowSpace& w) {
    std::set<int> s;
    for (int i = 0; i < w.hi(); ++i) s.insert(i);
    return LatticeSubspace(w, std::move(s));
}

LatticeSubspace LatticeSubspace::full(const WindowSpace& w) {
    std::set<int> s;
    for (int i = w.lo(); i < w.hi(); ++i) s.insert(i);
    return LatticeSubspace(w, std::move(s));
}

uint32_t LatticeSubspace::mask() const {
    uint32_t m = 0;
    for (int i : idx) m |= 1u << (i + N);
    return m;
}

bool LatticeSubspace::leq(const LatticeSubspace& o) const {
    require(N == o.N, "SpaceMismatch", "comparing lattice points of different windows");
    return std::includes(o.idx.begin(), o.idx.end(), idx.begin(), idx.end());
}

LatticeSubspace LatticeSubspace::meet(const LatticeSubspace& o) const {
    require(N == o.N, "SpaceMismatch", "meet across different windows");
    std::set<int> s;
    std::set_intersection(idx.begin(), idx.end(), o.idx.begin(), o.idx.end(), std::inserter(s, s.begin()));
    LatticeSubspace r;
    r.N = N;
    r.idx = std::move(s);
    return r;
}

LatticeSubspace LatticeSubspace::join(const LatticeSubspace& o) const {
    require(N == o.N, "SpaceMismatch", "join across different windows");
    std::set<int> s;
    std::set_union(idx.begin(), idx.end(), o.idx.begin(), o.idx.end(), std::inserter(s, s.begin()));
    LatticeSubspace r;
    r.N = N;
    r.idx = std::move(s);
    return r;
}

LatticeSubspace LatticeSubspace::complement() const {
    LatticeSubspace r;
    r.N = N;
    for (int i = -N; i < N; ++i)
        if (!idx.count(i)) r.idx.insert(i);
    return r;
}

LatticeSubspace LatticeSubspace::dual() const {
    // U^perp = { j : <u, t^j> = 0 for u in U } = { -1-i : i not in U }
    LatticeSubspace r;
    r.N = N;
    for (int i = -N; i < N; ++i)
        if (!idx.count(i)) r.idx.insert(-1 - i);
    return r;
}

std::string LatticeSubspace::to_string() const {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (int i : idx) {
        os << (first ? "" : ",") << i;
        first = false;
    }
    os << "}";
    return os.str();
}

std::vector<int> gap_indices(const LatticeSubspace& u1, const LatticeSubspace& u2) {
    require(u1.leq(u2), "NotNested", "gap of a non-nested pair");
    std::vector<int> g;
    for (int i : u2.idx)
        if (!u1.idx.count(i)) g.push_back(i);
    return g;
}

std::vector<LatticeSubspace> enumerate_lattice(const WindowSpace& w) {
    std::vector<LatticeSubspace> all;
    uint32_t top = 1u << w.dim();
    all.reserve(top);
    for (uint32_t m = 0; m < top; ++m) all.push_back(LatticeSubspace::from_mask(w, m));
    return all;
}

FinVec subquotient_space(const WindowSpace& w, const LatticeSubspace& u, const LatticeSubspace& up) {
    std::vector<int> g = gap_indices(up, u);
    std::vector<std::string> labels;
    labels.reserve(g.size());
    for (int i : g) labels.push_back(WindowSpace::label(i));
    return FinVec(u.to_string() + "/" + up.to_string(), labels);
}

LinMap subquotient_projection(const WindowSpace& w, const LatticeSubspace& u,
                              const LatticeSubspace& up, const LatticeSubspace& upp) {
    require(up.leq(upp) && upp.leq(u), "NotNested", "projection requires U' <= U'' <= U");
    FinVec src = subquotient_space(w, u, up);
    FinVec dst = subquotient_space(w, u, upp);
    std::vector<int> gsrc = gap_indices(up, u), gdst = gap_indices(upp, u);
    QMat m(dst.dim(), src.dim());
    for (size_t r = 0; r < gdst.size(); ++r) {
        auto it = std::find(gsrc.begin(), gsrc.end(), gdst[r]);
        m.at(static_cast<int>(r), static_cast<int>(it - gsrc.begin())) = 1;
    }
    return LinMap(src, dst, m);
}

LinMap subquotient_injection(const WindowSpace& w, const LatticeSubspace& u1,
                             const LatticeSubspace& u2, const LatticeSubspace& up) {
    require(up.leq(u1) && u1.leq(u2), "NotNested", "injection requires U' <= U1 <= U2");
    FinVec src = subquotient_space(w, u1, up);
    FinVec dst = subquotient_space(w, u2, up);
    std::vector<int> gsrc = gap_indices(up, u1), gdst = gap_indices(up, u2);
    QMat m(dst.dim(), src.dim());
    for (size_t c = 0; c < gsrc.size(); ++c) {
        auto it = std::find(gdst.begin(), gdst.end(), gsrc[c]);
        m.at(static_cast<int>(it - gdst.begin()), static_cast<int>(c)) = 1;
    }
    return LinMap(src, dst, m);
}

long DimensionTheory::value(const LatticeSubspace& u) const {
    WindowSpace w(N);
    LatticeSubspace u0 = LatticeSubspace::reference(w);
    LatticeSubspace m = u.meet(u0);
    return base + static_cast<long>(u.dim() - m.dim()) - static_cast<long>(u0.dim() - m.dim());
}

long relative_dim(const LatticeSubspace& uprime, const LatticeSubspace& u) {
    LatticeSubspace m = uprime.meet(u);
    return static_cast<long>(uprime.dim() - m.dim()) - static_cast<long>(u.dim() - m.dim());
}

DimensionTheory dual_dimension_theory(const DimensionTheory& d) {
    WindowSpace w(d.N);
    LatticeSubspace u0_dual = LatticeSubspace::reference(w); // reference of the dual window
    DimensionTheory r;
    r.N = d.N;
    r.base = -d.value(u0_dual.dual());
    return r;
}

void WindowSES::validate() const {
    require(sub.dim() + quot.dim() == total.dim(), "NotAdmissible", "window dimensions do not add up");
    std::set<int> used;
    int prev = total.lo() - 1;
    for (int i = sub.lo(); i < sub.hi(); ++i) {
        auto it = incl.find(i);
        require(it != incl.end(), "NotAdmissible", "inclusion map incomplete");
        require(it->second > prev, "NotAdmissible", "inclusion not increasing");
        prev = it->second;
        require(used.insert(it->second).second, "NotAdmissible", "inclusion not injective");
    }
    prev = total.lo() - 1;
    for (int j = quot.lo(); j < quot.hi(); ++j) {
        auto it = quot_pos.find(j);
        require(it != quot_pos.end(), "NotAdmissible", "quotient map incomplete");
        require(it->second > prev, "NotAdmissible", "quotient section not increasing");
        prev = it->second;
        require(used.insert(it->second).second, "NotAdmissible", "quotient positions overlap the subspace");
    }
    require(static_cast<int>(used.size()) == total.dim(), "NotAdmissible", "maps do not cover the window");
}

LatticeSubspace WindowSES::alpha_preimage(const LatticeSubspace& u) const {
    std::set<int> s;
    for (const auto& [i, pos] : incl)
        if (u.idx.count(pos)) s.insert(i);
    return LatticeSubspace(sub, std::move(s));
}

LatticeSubspace WindowSES::beta_image(const LatticeSubspace& u) const {
    std::set<int> s;
    for (const auto& [j, pos] : quot_pos)
        if (u.idx.count(pos)) s.insert(j);
    return LatticeSubspace(quot, std::move(s));
}

WindowSES WindowSES::block(const WindowSpace& total, int split) {
    require(split > total.lo() && split < total.hi(), "NotAdmissible", "block split outside the window");
    int nsub = split - total.lo();
    int nquot = total.dim() - nsub;
    require(nsub % 2 == 0 && nquot % 2 == 0, "NotAdmissible", "block halves must be even-dimensional windows");
    WindowSES s{WindowSpace(nsub / 2), total, WindowSpace(nquot / 2), {}, {}};
    int pos = total.lo();
    for (int i = s.sub.lo(); i < s.sub.hi(); ++i) s.incl[i] = pos++;
    for (int j = s.quot.lo(); j < s.quot.hi(); ++j) s.quot_pos[j] = pos++;
    s.validate();
    return s;
}

WindowSES WindowSES::interleave(const WindowSpace& sub, const WindowSpace& quot) {
    require(sub.N == quot.N, "NotAdmissible", "interleave needs equal windows");
    WindowSpace total(2 * sub.N);
    WindowSES s{sub, total, quot, {}, {}};
    int pos = total.lo();
    for (int i = sub.lo(); i < sub.hi(); ++i) {
        s.incl[i] = pos++;
        s.quot_pos[i] = pos++;
    }
    s.validate();
    return s;
}

DimensionTheory sum_dimension_theory(const DimensionTheory& dsub, const DimensionTheory& dquot,
                                     const WindowSES& seq) {
    seq.validate();
    require(dsub.N == seq.sub.N && dquot.N == seq.quot.N, "NotAdmissible", "theories on the wrong windows");
    LatticeSubspace u0 = LatticeSubspace::reference(seq.total);
    DimensionTheory r;
    r.N = seq.total.N;
    r.base = dsub.value(seq.alpha_preimage(u0)) + dquot.value(seq.beta_image(u0));
    return r;
}

namespace {

const Scalar& lookup_trans(const std::map<std::pair<uint32_t, uint32_t>, Scalar>& t,
                           const LatticeSubspace& u1, const LatticeSubspace& u2) {
    require(u1.leq(u2), "NotNested", "transition of a non-nested pair");
    auto it = t.find({u1.mask(), u2.mask()});
    require(it != t.end(), "MissingEntry", "no transition stored for " + u1.to_string() + " <= " + u2.to_string());
    return it->second;
}

template <typename Theory, typename Value, typename Compose>
std::optional<std::string> coherence_failure(const WindowSpace& w, const Theory& theory,
                                             Value (*get)(const Theory&, const LatticeSubspace&, const LatticeSubspace&),
                                             Compose compose) {
    auto lattice = enumerate_lattice(w);
    for (const auto& u1 : lattice)
        for (const auto& u2 : lattice) {
            if (!u1.leq(u2)) continue;
            for (const auto& u3 : lattice) {
                if (!u2.leq(u3)) continue;
                Value direct = get(theory, u1, u3);
                Value composed = compose(get(theory, u1, u2), get(theory, u2, u3));
                if (!(direct == composed))
                    return u1.to_string() + " <= " + u2.to_string() + " <= " + u3.to_string();
            }
        }
    return std::nullopt;
}

} // namespace

const Scalar& DetTheory::transition(const LatticeSubspace& u1, const LatticeSubspace& u2) const {
    return lookup_trans(trans, u1, u2);
}

const Scalar& DetTheory::scale(const LatticeSubspace& u) const {
    auto it = line_scale.find(u.mask());
    require(it != line_scale.end(), "MissingEntry", "no line stored for " + u.to_string());
    return it->second;
}

const Scalar& HaarTheory::transition(const LatticeSubspace& u1, const LatticeSubspace& u2) const {
    return lookup_trans(trans, u1, u2);
}

void HaarTheory::validate_positive() const {
    for (const auto& [k, v] : trans)
        require(v.is_positive(), "NotPositive", "Haar transition is not positive");
    for (const auto& [k, v] : line_scale)
        require(v.is_positive(), "NotPositive", "Haar line scale is not positive");
}

int OrientationTheory::transition(const LatticeSubspace& u1, const LatticeSubspace& u2) const {
    require(u1.leq(u2), "NotNested", "transition of a non-nested pair");
    auto it = trans.find({u1.mask(), u2.mask()});
    require(it != trans.end(), "MissingEntry", "no orientation transition stored");
    return it->second;
}

DetTheory canonical_det_theory(const WindowSpace& w, const LatticeSubspace& u_ref) {
    DetTheory d;
    d.N = w.N;
    d.name = "Delta" + u_ref.to_string();
    d.ref_mask = u_ref.mask();
    auto lattice = enumerate_lattice(w);
    for (const auto& u : lattice) d.line_scale[u.mask()] = Scalar::one();
    for (const auto& u1 : lattice)
        for (const auto& u2 : lattice)
            if (u1.leq(u2)) d.trans[{u1.mask(), u2.mask()}] = Scalar::one();
    return d;
}

DetTheory det_dual(const DetTheory& d) {
    WindowSpace w(d.N);
    DetTheory r;
    r.N = d.N;
    r.name = d.name + "^";
    r.ref_mask = LatticeSubspace::from_mask(w, d.ref_mask).dual().mask();
    auto lattice = enumerate_lattice(w);
    for (const auto& a : lattice) r.line_scale[a.mask()] = d.scale(a.dual()).inverse();
    for (const auto& a : lattice)
        for (const auto& b : lattice) {
            if (!a.leq(b)) continue;
            // Delta^(A) = Delta(A^perp)^*; the gap of (A,B) pairs with the
            // gap of (B^perp, A^perp) through the residue bases.
            r.trans[{a.mask(), b.mask()}] = d.transition(b.dual(), a.dual()).inverse();
        }
    return r;
}

DetTheory det_product(const DetTheory& dsub, const DetTheory& dquot, const WindowSES& seq) {
    seq.validate();
    require(dsub.N == seq.sub.N && dquot.N == seq.quot.N, "NotAdmissible", "theories on the wrong windows");
    DetTheory r;
    r.N = seq.total.N;
    r.name = dsub.name + "(x)" + dquot.name;
    {
        LatticeSubspace rs = LatticeSubspace::from_mask(seq.sub, dsub.ref_mask);
        LatticeSubspace rq = LatticeSubspace::from_mask(seq.quot, dquot.ref_mask);
        std::set<int> glued;
        for (int i : rs.idx) glued.insert(seq.incl.at(i));
        for (int j : rq.idx) glued.insert(seq.quot_pos.at(j));
        r.ref_mask = LatticeSubspace(seq.total, glued).mask();
    }
    auto lattice = enumerate_lattice(seq.total);
    for (const auto& u : lattice)
        r.line_scale[u.mask()] = dsub.scale(seq.alpha_preimage(u)) * dquot.scale(seq.beta_image(u));
    for (const auto& u1 : lattice)
        for (const auto& u2 : lattice) {
            if (!u1.leq(u2)) continue;
            r.trans[{u1.mask(), u2.mask()}] =
                dsub.transition(seq.alpha_preimage(u1), seq.alpha_preimage(u2)) *
                dquot.transition(seq.beta_image(u1), seq.beta_image(u2));
        }
    return r;
}

HaarTheory haar_from_det(const DetTheory& d) {
    HaarTheory h;
    h.N = d.N;
    h.name = "|" + d.name + "^*|";
    for (const auto& [k, v] : d.line_scale) h.line_scale[k] = v.abs_value();
    for (const auto& [k, v] : d.trans) h.trans[k] = v.abs_value();
    return h;
}

OrientationTheory orientation_from_det(const DetTheory& d) {
    OrientationTheory o;
    o.N = d.N;
    o.name = "sgn(" + d.name + ")";
    for (const auto& [k, v] : d.trans) {
        require(v.has_determinate_sign() && !v.is_zero(), "IndeterminateSign",
                "cannot take the sign of a mixed transition");
        o.trans[k] = v.is_positive() ? 1 : -1;
    }
    return o;
}

HaarTheory haar_dual(const HaarTheory& h) {
    WindowSpace w(h.N);
    HaarTheory r;
    r.N = h.N;
    r.name = h.name + "^";
    auto lattice = enumerate_lattice(w);
    for (const auto& a : lattice) {
        auto it = h.line_scale.find(a.dual().mask());
        r.line_scale[a.mask()] = it == h.line_scale.end() ? Scalar::one() : it->second.inverse();
    }
    for (const auto& a : lattice)
        for (const auto& b : lattice) {
            if (!a.leq(b)) continue;
            r.trans[{a.mask(), b.mask()}] = h.transition(b.dual(), a.dual()).inverse();
        }
    return r;
}

HaarTheory unit_haar_theory(const WindowSpace& w, const std::string& name) {
    HaarTheory h;
    h.N = w.N;
    h.name = name;
    auto lattice = enumerate_lattice(w);
    for (const auto& u : lattice) h.line_scale[u.mask()] = Scalar::one();
    for (const auto& u1 : lattice)
        for (const auto& u2 : lattice)
            if (u1.leq(u2)) h.trans[{u1.mask(), u2.mask()}] = Scalar::one();
    return h;
}

std::optional<std::string> det_coherence_failure(const WindowSpace& w, const DetTheory& d) {
    using Get = Scalar (*)(const DetTheory&, const LatticeSubspace&, const LatticeSubspace&);
    Get get = [](const DetTheory& t, const LatticeSubspace& a, const LatticeSubspace& b) {
        return t.transition(a, b);
    };
    return coherence_failure(w, d, get, [](const Scalar& x, const Scalar& y) { return x * y; });
}

std::optional<std::string> haar_coherence_failure(const WindowSpace& w, const HaarTheory& h) {
    using Get = Scalar (*)(const HaarTheory&, const LatticeSubspace&, const LatticeSubspace&);
    Get get = [](const HaarTheory& t, const LatticeSubspace& a, const LatticeSubspace& b) {
        return t.transition(a, b);
    };
    return coherence_failure(w, h, get, [](const Scalar& x, const Scalar& y) { return x * y; });
}

std::optional<std::string> orientation_coherence_failure(const WindowSpace& w, const OrientationTheory& o) {
    // orientation theories may live on a sublattice (the complex-paired
    // one); triples with missing transitions are skipped
    auto lattice = enumerate_lattice(w);
    auto get = [&](const LatticeSubspace& a, const LatticeSubspace& b) -> const int* {
        auto it = o.trans.find({a.mask(), b.mask()});
        return it == o.trans.end() ? nullptr : &it->second;
    };
    for (const auto& u1 : lattice)
        for (const auto& u2 : lattice) {
            if (!u1.leq(u2)) continue;
            const int* t12 = get(u1, u2);
            if (!t12) continue;
            for (const auto& u3 : lattice) {
                if (!u2.leq(u3)) continue;
                const int* t23 = get(u2, u3);
                const int* t13 = get(u1, u3);
                if (!t23 || !t13) continue;
                if (*t13 != *t12 * *t23)
                    return u1.to_string() + " <= " + u2.to_string() + " <= " + u3.to_string();
            }
        }
    return std::nullopt;
}

std::optional<std::map<uint32_t, Scalar>> det_theory_hom(const WindowSpace& w, const DetTheory& a, const DetTheory& b) {
    // c(U2) tA(U1,U2) = tB(U1,U2) c(U1), normalized c(U0) = 1.  Every U
    // connects to U0 through the meet, so propagate and then verify all
    // pairs.
    LatticeSubspace u0 = LatticeSubspace::reference(w);
    auto lattice = enumerate_lattice(w);
    std::map<uint32_t, Scalar> c;
    for (const auto& u : lattice) {
        LatticeSubspace m = u.meet(u0);
        // c(M) from c(U0) downward, then c(U) from c(M) upward.
        Scalar cm = b.transition(m, u0).inverse() * a.transition(m, u0);
        c[u.mask()] = cm * b.transition(m, u) * a.transition(m, u).inverse();
    }
    for (const auto& u1 : lattice)
        for (const auto& u2 : lattice) {
            if (!u1.leq(u2)) continue;
            if (c[u2.mask()] * a.transition(u1, u2) != b.transition(u1, u2) * c[u1.mask()])
                return std::nullopt;
        }
    return c;
}

GLElement::GLElement(QMat m) : g(std::move(m)) {
    require(g.rows() == g.cols(), "BadMatrix", "window automorphism must be square");
    require(g.det() != 0, "SingularMatrix", "window automorphism must be invertible");
}

namespace {

QQ corner_det(const WindowSpace& w, const LatticeSubspace& ref, const QMat& g) {
    std::vector<int> sel;
    for (int i : ref.idx) sel.push_back(w.index_of(i));
    QQ d = g.submatrix(sel, sel).det();
    require(d != 0, "SingularCorner",
            "comparison undefined: the reference corner block of the automorphism is singular");
    return d;
}

} // namespace

Scalar central_cocycle(const WindowSpace& w, const GLElement& g1, const GLElement& g2, const DetTheory& d) {
    require(d.N == w.N, "SpaceMismatch", "determinantal theory on the wrong window");
    require(g1.g.rows() == w.dim() && g2.g.rows() == w.dim(), "BadMatrix", "automorphism size mismatch");
    LatticeSubspace ref = d.reference();
    QQ a1 = corner_det(w, ref, g1.g);
    QQ a2 = corner_det(w, ref, g2.g);
    QQ a12 = corner_det(w, ref, g1.g * g2.g);
    return Scalar::of(a1 * a2 / a12);
}

} // namespace semimeasure
