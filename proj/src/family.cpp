#include "semimeasure/family.hpp"

#include <algorithm>

namespace semimeasure {

QuadraticTheory::QuadraticTheory(WindowSpace win, PosDefForm f) : w(win), form(std::move(f)) {
    require(form.space() == w.space(), "SpaceMismatch", "window form must live on the window space");
}

QuadraticTheory QuadraticTheory::standard(const WindowSpace& win) {
    return QuadraticTheory(win, PosDefForm::standard(win.space()));
}

namespace {

std::vector<int> window_positions(const WindowSpace& w, const LatticeSubspace& u) {
    std::vector<int> pos;
    pos.reserve(u.idx.size());
    for (int i : u.idx) pos.push_back(w.index_of(i));
    return pos;
}

} // namespace

PosDefForm forms_from_theory(const QuadraticTheory& q, const LatticeSubspace& u, const LatticeSubspace& up) {
    require(up.leq(u), "NotNested", "subquotient requires U' <= U");
    LatticeSubspace none = LatticeSubspace::empty(q.w);
    FinVec model_u = subquotient_space(q.w, u, none);
    std::vector<int> pos = window_positions(q.w, u);
    PosDefForm on_u(SymBilForm(model_u, q.form.mat().submatrix(pos, pos)));
    if (up.dim() == 0) return on_u;
    return pushforward_form(on_u, subquotient_projection(q.w, u, none, up));
}

Scalar q_trivialize_haar(const QuadraticTheory& q, const LatticeSubspace& u1, const LatticeSubspace& u2) {
    require(u1.leq(u2), "NotNested", "trivialization requires U1 <= U2");
    PosDefForm g = forms_from_theory(q, u2, u1);
    return Scalar::sqrt_rational(g.dim() == 0 ? QQ(1) : g.mat().det());
}

HaarTheory haar_theory_of_quadratic(const QuadraticTheory& q) {
    HaarTheory h;
    h.N = q.w.N;
    h.name = "h_q";
    auto lattice = enumerate_lattice(q.w);
    for (const auto& u : lattice) h.line_scale[u.mask()] = Scalar::one();
    for (const auto& u1 : lattice)
        for (const auto& u2 : lattice)
            if (u1.leq(u2)) h.trans[{u1.mask(), u2.mask()}] = q_trivialize_haar(q, u1, u2);
    return h;
}

QuadraticTheory quadratic_dual(const QuadraticTheory& q) {
    int n = q.w.dim();
    QMat inv = q.form.mat().inverse();
    QMat rev(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rev.at(i, j) = inv.at(n - 1 - i, n - 1 - j);
    return QuadraticTheory(q.w, PosDefForm(SymBilForm(q.w.space(), rev)));
}

const AlmostGaussianMeasure& CoherentMeasureFamily::entry(const LatticeSubspace& u, const LatticeSubspace& up) const {
    auto it = entries.find(FamilyKey{u.mask(), up.mask()});
    require(it != entries.end(), "MissingEntry",
            "no family entry at " + u.to_string() + "/" + up.to_string());
    return it->second;
}

bool CoherentMeasureFamily::has_entry(const LatticeSubspace& u, const LatticeSubspace& up) const {
    return entries.count(FamilyKey{u.mask(), up.mask()}) > 0;
}

CoherentMeasureFamily generate_family(const WindowSpace& w, const HaarTheory& haar,
                                      const AlmostGaussianMeasure& top) {
    require(haar.N == w.N, "SpaceMismatch", "Haar theory on the wrong window");
    LatticeSubspace full = LatticeSubspace::full(w);
    LatticeSubspace none = LatticeSubspace::empty(w);
    require(top.space == subquotient_space(w, full, none), "SpaceMismatch",
            "top measure must live on the full window model");
    require(top.tags.empty(), "TaggedMeasure", "top measure must be untagged");
    CoherentMeasureFamily fam;
    fam.w = w;
    fam.haar = haar;
    auto lattice = enumerate_lattice(w);
    for (const auto& u : lattice) {
        AlmostGaussianMeasure on_u = top;
        if (!(u == full)) {
            AlmostGaussianMeasure pulled = pullback_measure(top, subquotient_injection(w, u, full, none));
            Scalar c = Scalar::one();
            for (const auto& t : pulled.tags) c = c * t.coeff;
            Scalar scale = c * haar.transition(u, full).inverse();
            on_u = AlmostGaussianMeasure(pulled.q, pulled.p.scaled(scale));
        }
        for (const auto& up : lattice) {
            if (!up.leq(u)) continue;
            AlmostGaussianMeasure e =
                up.dim() == 0 ? on_u : pushforward_measure(on_u, subquotient_projection(w, u, none, up));
            fam.entries.emplace(FamilyKey{u.mask(), up.mask()}, std::move(e));
        }
    }
    return fam;
}

CoherentMeasureFamily gaussian_family(const QuadraticTheory& q, const LatticeSubspace& u_ref) {
    HaarTheory h = haar_theory_of_quadratic(q);
    h.name = "|Delta" + u_ref.to_string() + "^*|_q";
    LatticeSubspace full = LatticeSubspace::full(q.w);
    LatticeSubspace none = LatticeSubspace::empty(q.w);
    FinVec model = subquotient_space(q.w, full, none);
    AlmostGaussianMeasure top = AlmostGaussianMeasure::gaussian(PosDefForm(SymBilForm(model, q.form.mat())));
    return generate_family(q.w, h, top);
}

AuditReport check_coherence(const CoherentMeasureFamily& fam) {
    AuditReport r;
    r.suite = "family-coherence";
    const WindowSpace& w = fam.w;
    for (const auto& [key, m] : fam.entries) {
        LatticeSubspace u = LatticeSubspace::from_mask(w, key.u);
        LatticeSubspace up = LatticeSubspace::from_mask(w, key.up);
        for (const auto& [key2, m2] : fam.entries) {
            // quotient shrinks: U fixed, U' <= U''
            if (key2.u == key.u && (key.up & key2.up) == key.up && key2.up != key.up) {
                LatticeSubspace upp = LatticeSubspace::from_mask(w, key2.up);
                AlmostGaussianMeasure pushed =
                    pushforward_measure(m, subquotient_projection(w, u, up, upp));
                r.add("pushforward", u.to_string() + "/" + up.to_string() + "->" + upp.to_string(),
                      pushed == m2, "direct image disagrees with the stored entry");
            }
            // U shrinks: U' fixed, U1 <= U
            if (key2.up == key.up && (key2.u & key.u) == key2.u && key2.u != key.u) {
                LatticeSubspace u1 = LatticeSubspace::from_mask(w, key2.u);
                AlmostGaussianMeasure pulled =
                    pullback_measure(m, subquotient_injection(w, u1, u, up));
                Scalar c = Scalar::one();
                for (const auto& t : pulled.tags) c = c * t.coeff;
                AlmostGaussianMeasure lhs(pulled.q,
                                          pulled.p.scaled(c * fam.haar.transition(u1, u).inverse()));
                r.add("pullback", u1.to_string() + "<=" + u.to_string() + " over " + up.to_string(),
                      lhs == m2, "inverse image disagrees with the stored entry");
            }
        }
    }
    return r;
}

CoherentMeasureFamily fourier_family(const CoherentMeasureFamily& fam) {
    AuditReport pre = check_coherence(fam);
    require(pre.passed(), "IncoherentInput", "Fourier transform of an incoherent family");
    CoherentMeasureFamily out;
    out.w = fam.w;
    out.haar = haar_dual(fam.haar);
    const WindowSpace& w = fam.w;
    for (const auto& [key, m] : fam.entries) {
        LatticeSubspace u = LatticeSubspace::from_mask(w, key.u);
        LatticeSubspace up = LatticeSubspace::from_mask(w, key.up);
        AGFunction f = fourier(m);
        AlmostGaussianMeasure mu = function_to_measure(f);
        LatticeSubspace du = up.dual(), dup = u.dual();
        FinVec target = subquotient_space(w, du, dup);
        // t^i-coordinate functional corresponds to t^(-1-i) in the dual window
        std::vector<int> src_gap = gap_indices(up, u), dst_gap = gap_indices(dup, du);
        QMat t(target.dim(), mu.space.dim());
        for (size_t c = 0; c < src_gap.size(); ++c) {
            int j = -1 - src_gap[c];
            auto it = std::find(dst_gap.begin(), dst_gap.end(), j);
            t.at(static_cast<int>(it - dst_gap.begin()), static_cast<int>(c)) = 1;
        }
        out.entries.emplace(FamilyKey{du.mask(), dup.mask()},
                            pushforward_measure(mu, LinMap(mu.space, target, t)));
    }
    return out;
}

LatticeSubspace WindowGenerator::coordinate_support(const WindowSpace& w) const {
    require(static_cast<int>(coeffs.size()) == w.dim(), "BadIndex", "generator coordinate length mismatch");
    std::set<int> s;
    for (int k = 0; k < w.dim(); ++k)
        if (coeffs[k] != 0) s.insert(k - w.N);
    return LatticeSubspace(w, std::move(s));
}

CoherentMeasureFamily heisenberg_on_family(const WindowGenerator& g, const CoherentMeasureFamily& fam) {
    const WindowSpace& w = fam.w;
    LatticeSubspace supp = g.coordinate_support(w);
    CoherentMeasureFamily out;
    out.w = w;
    out.haar = fam.haar;
    for (const auto& [key, m] : fam.entries) {
        LatticeSubspace u = LatticeSubspace::from_mask(w, key.u);
        LatticeSubspace up = LatticeSubspace::from_mask(w, key.up);
        std::vector<int> gap = gap_indices(up, u);
        if (g.is_vector) {
            if (!supp.leq(u)) continue; // v must lie inside U
            std::vector<QQ> v(gap.size(), QQ(0));
            for (size_t k = 0; k < gap.size(); ++k) v[k] = g.coeffs[w.index_of(gap[k])];
            out.entries.emplace(key, apply_heisenberg(HeisenbergOp::vector_op(v), m));
        } else {
            if (supp.meet(up).dim() != 0) continue; // f must vanish on U'
            std::vector<QQ> f(gap.size(), QQ(0));
            for (size_t k = 0; k < gap.size(); ++k) f[k] = g.coeffs[w.index_of(gap[k])];
            out.entries.emplace(key, apply_heisenberg(HeisenbergOp::covector_op(f), m));
        }
    }
    return out;
}

namespace {

std::vector<std::string> support_labels(const DeskDistribution& d) {
    return d.support.source.basis;
}

// Coordinate injection of the span of `labels` into `model`.
LinMap coordinate_support_injection(const FinVec& model, const std::vector<std::string>& labels) {
    FinVec src("supp", labels);
    QMat m(model.dim(), src.dim());
    for (int c = 0; c < src.dim(); ++c) {
        auto it = std::find(model.basis.begin(), model.basis.end(), labels[c]);
        require(it != model.basis.end(), "BadIndex", "support label missing from the model");
        m.at(static_cast<int>(it - model.basis.begin()), c) = 1;
    }
    return LinMap(src, model, m);
}

} // namespace

DistributionGerm saturate_germ(const DistributionGerm& g, const LatticeSubspace& new_u1,
                               const LatticeSubspace& new_u2) {
    require(g.u1.leq(new_u1), "NotNested", "saturation must grow U1");
    require(new_u2.leq(g.u2), "NotNested", "saturation must shrink U2");
    const WindowSpace w(g.w.N);
    DistributionGerm r = g;

    // shrink U2: extend the support by the new fiber directions, density
    // constant along them
    if (!(new_u2 == g.u2)) {
        FinVec model = subquotient_space(w, g.u1, new_u2);
        std::vector<std::string> labels = support_labels(g.dist);
        for (int i : gap_indices(new_u2, g.u2)) labels.push_back(WindowSpace::label(i));
        std::sort(labels.begin(), labels.end(), [&](const std::string& a, const std::string& b) {
            auto pos = [&](const std::string& l) {
                return std::find(model.basis.begin(), model.basis.end(), l) - model.basis.begin();
            };
            return pos(a) < pos(b);
        });
        LinMap supp = coordinate_support_injection(model, labels);
        // old support variables sit inside the new support
        const FinVec& old_src = g.dist.support.source;
        std::vector<Polynomial> images;
        images.reserve(old_src.dim());
        QMat form(supp.source.dim(), supp.source.dim());
        for (int i = 0; i < old_src.dim(); ++i) {
            auto it = std::find(supp.source.basis.begin(), supp.source.basis.end(), old_src.basis[i]);
            images.push_back(Polynomial::variable(supp.source, static_cast<int>(it - supp.source.basis.begin())));
        }
        for (int i = 0; i < old_src.dim(); ++i) {
            int pi = static_cast<int>(std::find(supp.source.basis.begin(), supp.source.basis.end(),
                                                old_src.basis[i]) - supp.source.basis.begin());
            for (int j = 0; j < old_src.dim(); ++j) {
                int pj = static_cast<int>(std::find(supp.source.basis.begin(), supp.source.basis.end(),
                                                    old_src.basis[j]) - supp.source.basis.begin());
                form.at(pi, pj) = g.dist.density_form.at(i, j);
            }
        }
        r.dist.support = supp;
        r.dist.density_poly = g.dist.density_poly.substitute(supp.source, images);
        r.dist.density_form = form;
        r.u2 = new_u2;
    }

    // grow U1: push the support forward, discharge the Haar transition
    if (!(new_u1 == r.u1)) {
        LinMap incl = subquotient_injection(w, r.u1, new_u1, r.u2);
        r.dist.support = incl.compose(r.dist.support);
        r.h_coeff = r.h_coeff * g.haar.transition(r.u1, new_u1).inverse();
        r.u1 = new_u1;
    }
    return r;
}

bool germ_equal(const DistributionGerm& a, const DistributionGerm& b) {
    require(a.haar.trans == b.haar.trans, "TagMismatch", "germs against different Haar theories");
    LatticeSubspace u1 = a.u1.join(b.u1);
    LatticeSubspace u2 = a.u2.meet(b.u2);
    DistributionGerm sa = saturate_germ(a, u1, u2);
    DistributionGerm sb = saturate_germ(b, u1, u2);
    if (sa.is_zero() && sb.is_zero()) return true;
    if (sa.is_zero() != sb.is_zero()) return false;
    return sa.dist.support.source.basis == sb.dist.support.source.basis &&
           sa.dist.density_poly == sb.dist.density_poly &&
           sa.dist.density_form == sb.dist.density_form &&
           normalize_tags(sa.dist.tags) == normalize_tags(sb.dist.tags) && sa.h_coeff == sb.h_coeff;
}

DistributionGerm germ_heisenberg(const WindowGenerator& g, const DistributionGerm& germ) {
    const WindowSpace w(germ.w.N);
    LatticeSubspace supp = g.coordinate_support(w);
    LatticeSubspace u1 = g.is_vector ? germ.u1.join(supp) : germ.u1;
    LatticeSubspace u2 = germ.u2.meet(supp.complement());
    DistributionGerm s = saturate_germ(germ, u1, u2);
    const std::vector<std::string>& labels = s.dist.support.source.basis;
    auto support_var = [&](int window_index) {
        std::string l = WindowSpace::label(window_index);
        auto it = std::find(labels.begin(), labels.end(), l);
        return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
    };
    DistributionGerm out = s;
    const FinVec& src = s.dist.support.source;
    if (g.is_vector) {
        // constant field v mod U2, acting along the support
        Polynomial dp(src);
        std::vector<QQ> vsup(src.dim(), QQ(0));
        for (int i : supp.idx) {
            if (u2.contains(i)) continue;
            int var = support_var(i);
            require(var >= 0, "TransversalDerivative",
                    "derivative transversal to the support is outside this distribution class");
            vsup[var] = g.coeffs[w.index_of(i)];
        }
        for (int k = 0; k < src.dim(); ++k)
            if (vsup[k] != 0) dp = dp + s.dist.density_poly.partial(k).scaled(Scalar::of(vsup[k]));
        std::vector<QQ> fv = s.dist.density_form.apply(vsup);
        out.dist.density_poly = dp - Polynomial::linear(src, fv) * s.dist.density_poly;
    } else {
        std::vector<QQ> f(src.dim(), QQ(0));
        for (int i : supp.idx) {
            if (!s.u1.contains(i) || u2.contains(i)) continue;
            int var = support_var(i);
            if (var < 0) continue; // coordinate vanishing on the support kills the term
            f[var] = g.coeffs[w.index_of(i)];
        }
        out.dist.density_poly = Polynomial::linear(src, f) * s.dist.density_poly;
    }
    return out;
}

VacuumElement vacuum_delta(const WindowSpace& w, const HaarTheory& haar, const LatticeSubspace& u) {
    require(haar.N == w.N, "SpaceMismatch", "Haar theory on the wrong window");
    FinVec model = subquotient_space(w, u, u);
    DeskDistribution dist{LinMap::identity(model), Polynomial::one(model), QMat(0, 0), {}};
    DistributionGerm germ{w, haar, u, u, dist, Scalar::one()};
    return VacuumElement{u, germ};
}

AuditReport vacuum_relations_report(const WindowSpace& w, const LatticeSubspace& u) {
    AuditReport r;
    r.suite = "vacuum-relations";
    HaarTheory h = unit_haar_theory(w, "|Delta" + u.to_string() + "^*|");
    VacuumElement delta = vacuum_delta(w, h, u);
    for (int i : u.idx) {
        WindowGenerator v{true, std::vector<QQ>(w.dim(), QQ(0))};
        v.coeffs[w.index_of(i)] = 1;
        r.add("annihilated-by-vector", u.to_string() + " v=t^" + std::to_string(i),
              germ_heisenberg(v, delta.germ).is_zero(), "L_v delta_U is nonzero");
    }
    for (int i = -w.N; i < w.N; ++i) {
        if (u.contains(i)) continue;
        WindowGenerator f{false, std::vector<QQ>(w.dim(), QQ(0))};
        f.coeffs[w.index_of(i)] = 1;
        r.add("annihilated-by-functional", u.to_string() + " f=(t^" + std::to_string(i) + ")*",
              germ_heisenberg(f, delta.germ).is_zero(), "L_f delta_U is nonzero");
    }
    return r;
}

Scalar pair_family(const CoherentMeasureFamily& fam, const DistributionGerm& germ) {
    require(fam.haar.trans == germ.haar.trans, "TagMismatch",
            "family and germ carry different Haar theories");
    const AlmostGaussianMeasure& m = fam.entry(germ.u1, germ.u2);
    DeskDistribution d = germ.dist;
    // The saturation maps consumed the transverse |det|^* factors in the
    // Gaussian-preserving normalization; the pairing supplies the dual
    // line with the sigma power that converts the bare restriction to it.
    auto labels = cokernel_complement_labels(d.support);
    if (!labels.empty())
        d.tags.push_back(HaarTag{haar_line_of_labels(labels), -1,
                                 Scalar::sigma_pow(2 * static_cast<int>(labels.size()))});
    return pair_distribution(d, m) * germ.h_coeff;
}

int family_max_degree(const CoherentMeasureFamily& fam) {
    int d = 0;
    for (const auto& [k, m] : fam.entries) d = std::max(d, m.p.total_degree());
    return d;
}

} // namespace semimeasure
