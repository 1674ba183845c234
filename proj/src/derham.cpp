#include "semimeasure/derham.hpp"

#include <algorithm>

namespace semimeasure {

AGForm::AGForm(FinVec sp, PosDefForm form, int deg) : space(std::move(sp)), q(std::move(form)), degree(deg) {
    require(q.space() == space, "SpaceMismatch", "form coefficients and metric live on different spaces");
    require(degree >= 0 && degree <= space.dim(), "BadIndex", "form degree out of range");
}

void AGForm::add_comp(std::vector<int> idx, const Polynomial& p) {
    if (p.is_zero()) return;
    require(static_cast<int>(idx.size()) == degree, "BadIndex", "component size does not match the degree");
    int swaps = 0;
    for (size_t i = 1; i < idx.size(); ++i)
        for (size_t j = i; j > 0 && idx[j] < idx[j - 1]; --j) {
            std::swap(idx[j], idx[j - 1]);
            ++swaps;
        }
    for (size_t i = 0; i + 1 < idx.size(); ++i)
        if (idx[i] == idx[i + 1]) return;
    Polynomial signed_p = (swaps % 2) ? -p : p;
    auto it = comps.find(idx);
    if (it == comps.end()) {
        comps.emplace(std::move(idx), signed_p);
    } else {
        it->second = it->second + signed_p;
        if (it->second.is_zero()) comps.erase(it);
    }
}

AGForm AGForm::scaled(const Scalar& c) const {
    AGForm r(space, q, degree);
    for (const auto& [s, p] : comps) {
        Polynomial sp = p.scaled(c);
        if (!sp.is_zero()) r.comps.emplace(s, sp);
    }
    return r;
}

bool AGForm::operator==(const AGForm& o) const {
    if (comps.empty() && o.comps.empty()) return space == o.space;
    return space == o.space && q == o.q && degree == o.degree && comps == o.comps;
}

bool OrientedForm::operator==(const OrientedForm& o) const {
    if (form.is_zero() && o.form.is_zero()) return form.space == o.form.space;
    // the orientation coefficient scales the form, compare the content
    return form == o.form.scaled(o.or_coeff * or_coeff.inverse()) &&
           normalize_tags(tags) == normalize_tags(o.tags);
}

AGForm exterior_d(const AGForm& w) {
    if (w.degree >= w.space.dim()) {
        return AGForm(w.space, w.q, std::min(w.degree + 1, w.space.dim()));
    }
    AGForm r(w.space, w.q, w.degree + 1);
    for (const auto& [idx, p] : w.comps) {
        for (int j = 0; j < w.space.dim(); ++j) {
            if (std::binary_search(idx.begin(), idx.end(), j)) continue;
            // d_j (p e^{-q/2}) = (d_j p - (Bx)_j p) e^{-q/2}, dx_j wedged
            // from the left
            Polynomial lead = p.partial(j) - Polynomial::linear(w.space, w.q.mat().row(j)) * p;
            std::vector<int> jidx;
            jidx.reserve(idx.size() + 1);
            jidx.push_back(j);
            jidx.insert(jidx.end(), idx.begin(), idx.end());
            r.add_comp(std::move(jidx), lead);
        }
    }
    return r;
}

namespace {

// Expand a form through a linear change of coframe dx_i = sum_j T_{ij} dy_j
// with simultaneous variable substitution x = T y.
std::map<std::vector<int>, Polynomial> reframe(const AGForm& w, const FinVec& target, const QMat& T) {
    std::vector<Polynomial> var_images;
    var_images.reserve(w.space.dim());
    for (int i = 0; i < w.space.dim(); ++i)
        var_images.push_back(Polynomial::linear(target, T.row(i)));
    std::map<std::vector<int>, Polynomial> out;
    for (const auto& [idx, p] : w.comps) {
        Polynomial psub = p.substitute(target, var_images);
        // expand the covector wedge: start from the substituted coefficient
        std::map<std::vector<int>, Polynomial> acc;
        acc.emplace(std::vector<int>{}, psub);
        for (int i : idx) {
            std::map<std::vector<int>, Polynomial> next;
            for (const auto& [s, coeff] : acc) {
                for (int j = 0; j < target.dim(); ++j) {
                    if (T.at(i, j) == 0) continue;
                    if (std::find(s.begin(), s.end(), j) != s.end()) continue;
                    std::vector<int> sj = s;
                    sj.push_back(j);
                    // sort with sign
                    int swaps = 0;
                    for (size_t a = sj.size() - 1; a > 0 && sj[a] < sj[a - 1]; --a) {
                        std::swap(sj[a], sj[a - 1]);
                        ++swaps;
                    }
                    Polynomial add = coeff.scaled(Scalar::of((swaps % 2) ? -T.at(i, j) : T.at(i, j)));
                    auto it = next.find(sj);
                    if (it == next.end()) next.emplace(std::move(sj), add);
                    else {
                        it->second = it->second + add;
                        if (it->second.is_zero()) next.erase(it);
                    }
                }
            }
            acc = std::move(next);
        }
        for (const auto& [s, coeff] : acc) {
            auto it = out.find(s);
            if (it == out.end()) out.emplace(s, coeff);
            else {
                it->second = it->second + coeff;
                if (it->second.is_zero()) out.erase(it);
            }
        }
    }
    return out;
}

} // namespace

OrientedForm fiber_integrate(const OrientedForm& w, const LinMap& beta) {
    const AGForm& f = w.form;
    require(beta.source == f.space, "SpaceMismatch", "fiber integration source mismatch");
    auto [K, S] = orthogonal_splitting(f.q, beta); // throws NotSurjective
    int k = K.cols(), m = beta.target.dim();
    if (f.degree < k) {
        // no component carries the full fiber coframe
        return OrientedForm{AGForm(beta.target, pushforward_form(f.q, beta), 0), w.or_coeff, w.tags};
    }
    // mixed coordinates: base first (target coordinates), fiber last
    FinVec mixed("frame(" + f.space.name + ")", [&] {
        std::vector<std::string> l = beta.target.basis;
        for (int i = 0; i < k; ++i) l.push_back("u" + std::to_string(i));
        return l;
    }());
    QMat T = S.hcat(K); // x = T (w, u)
    AGForm mixed_form(mixed, PosDefForm(SymBilForm(mixed, T.transpose() * f.q.mat() * T)), f.degree);
    mixed_form.comps = reframe(f, mixed, T);

    QMat qk = k == 0 ? QMat(0, 0) : K.transpose() * f.q.mat() * K;
    QMat fiber_cov = k == 0 ? QMat(0, 0) : qk.inverse();
    Scalar gauss_const = Scalar::sigma_pow(2 * k) * Scalar::sqrt_rational(k == 0 ? QQ(1) : qk.det()).inverse();

    PosDefForm qpush = pushforward_form(f.q, beta);
    AGForm out(beta.target, qpush, f.degree - k);
    for (const auto& [idx, p] : mixed_form.comps) {
        // keep components carrying the full fiber coframe block du_0..du_{k-1}
        std::vector<int> base;
        int fiber_count = 0;
        for (int j : idx) {
            if (j >= m) ++fiber_count;
            else base.push_back(j);
        }
        if (fiber_count != k) continue;
        // integrate the fiber variables of the coefficient
        Polynomial integrated(beta.target);
        for (const auto& [e, c] : p.terms()) {
            std::vector<int> we(e.begin(), e.begin() + m);
            std::vector<int> ue(e.begin() + m, e.end());
            QQ mom = isserlis_moment(fiber_cov, ue);
            if (mom == 0) continue;
            integrated.add_term(we, c * Scalar::of(mom));
        }
        out.add_comp(base, integrated.scaled(gauss_const));
    }
    OrientedForm r{out, w.or_coeff, w.tags};
    QQ dt = T.det();
    if (dt < 0) r.or_coeff = -r.or_coeff;
    return r;
}

OrientedForm restrict_form_deRham(const OrientedForm& w, const LinMap& alpha) {
    const AGForm& f = w.form;
    require(alpha.target == f.space, "SpaceMismatch", "restriction target mismatch");
    require(alpha.is_injective(), "NotInjective", "form restriction along a non-injective map");
    AGForm out(alpha.source, restrict_form(f.q, alpha), std::min(f.degree, alpha.source.dim()));
    if (f.degree <= alpha.source.dim()) {
        // dx_i pulls back to sum_j alpha_{ij} dy_j with x = alpha y
        AGForm tmp(f.space, f.q, f.degree);
        tmp.comps = f.comps;
        auto reframed = reframe(tmp, alpha.source, alpha.mat);
        out.comps = std::move(reframed);
    }
    OrientedForm r{out, w.or_coeff, w.tags};
    auto labels = cokernel_complement_labels(alpha);
    if (!labels.empty()) {
        std::string line = "OR(";
        for (size_t i = 0; i < labels.size(); ++i) line += (i ? "," : "") + labels[i];
        line += ")";
        r.tags.push_back(HaarTag{line, 1, Scalar::one()});
        r.tags = normalize_tags(r.tags);
    }
    return r;
}

bool is_complex_subspace(const WindowSpace& w, const LatticeSubspace& u) {
    for (int i : u.idx) {
        int partner = ((i + w.N) % 2 == 0) ? i + 1 : i - 1;
        if (!u.contains(partner)) return false;
    }
    return true;
}

int complex_orientation(const WindowSpace& w, const LatticeSubspace& u1, const LatticeSubspace& u2) {
    require(u1.leq(u2), "NotNested", "orientation transition of a non-nested pair");
    require(is_complex_subspace(w, u1) && is_complex_subspace(w, u2), "NotComplexWindow",
            "lattice points are not complex-paired");
    return 1;
}

OrientationTheory complex_orientation_theory(const WindowSpace& w) {
    OrientationTheory o;
    o.N = w.N;
    o.name = "C";
    for (const auto& u1 : enumerate_lattice(w)) {
        if (!is_complex_subspace(w, u1)) continue;
        for (const auto& u2 : enumerate_lattice(w)) {
            if (!is_complex_subspace(w, u2) || !u1.leq(u2)) continue;
            o.trans[{u1.mask(), u2.mask()}] = 1;
        }
    }
    return o;
}

const OrientedForm& DeRhamFamily::entry(const LatticeSubspace& u, const LatticeSubspace& up) const {
    auto it = entries.find(FamilyKey{u.mask(), up.mask()});
    require(it != entries.end(), "MissingEntry",
            "no de Rham entry at " + u.to_string() + "/" + up.to_string());
    return it->second;
}

DeRhamFamily build_semiinf_derham(const OrientationTheory& orient, const QuadraticTheory& q,
                                  bool complex_model) {
    const WindowSpace& w = q.w;
    require(orient.N == w.N, "SpaceMismatch", "orientation theory on the wrong window");
    require(!orientation_coherence_failure(w, orient).has_value(), "IncoherentOrientation",
            "orientation theory fails triple coherence");
    DeRhamFamily fam;
    fam.w = w;
    fam.orient = orient;
    fam.complex_model = complex_model;
    for (const auto& u : enumerate_lattice(w)) {
        if (complex_model && !is_complex_subspace(w, u)) continue;
        for (const auto& up : enumerate_lattice(w)) {
            if (!up.leq(u)) continue;
            if (complex_model && !is_complex_subspace(w, up)) continue;
            PosDefForm qf = forms_from_theory(q, u, up);
            int m = qf.dim();
            AGForm top(qf.space(), qf, m);
            std::vector<int> all(m);
            for (int i = 0; i < m; ++i) all[i] = i;
            Scalar norm = Scalar::sigma_pow(-2 * m) * Scalar::sqrt_rational(m == 0 ? QQ(1) : qf.mat().det());
            top.add_comp(all, Polynomial::constant(qf.space(), norm));
            fam.entries.emplace(FamilyKey{u.mask(), up.mask()}, OrientedForm{top, Scalar::one(), {}});
        }
    }
    return fam;
}

long derham_torsor_degree(const OrientedForm& f, const LatticeSubspace& u, const LatticeSubspace& up) {
    return static_cast<long>(f.form.degree) - (u.dim() - up.dim());
}

namespace {

// Contract from the right with the coordinate polyvector of `strip`
// (ascending), then restrict to the coordinate subspace of the kept
// indices; realizes the transverse part of the measure restriction for
// forms.
OrientedForm contract_restrict(const OrientedForm& w, const LinMap& alpha, const std::vector<int>& strip) {
    const AGForm& f = w.form;
    AGForm mid(f.space, f.q, f.degree - static_cast<int>(strip.size()));
    for (const auto& [idx, p] : f.comps) {
        bool has_all = true;
        for (int t : strip)
            if (!std::binary_search(idx.begin(), idx.end(), t)) { has_all = false; break; }
        if (!has_all) continue;
        std::vector<int> rest;
        int sign = 0;
        for (int x : idx)
            if (std::find(strip.begin(), strip.end(), x) == std::end(strip)) rest.push_back(x);
        for (int t : strip)
            for (int x : rest)
                if (x > t) ++sign;
        mid.add_comp(rest, (sign % 2) ? -p : p);
    }
    OrientedForm tmp{mid, w.or_coeff, w.tags};
    return restrict_form_deRham(tmp, alpha);
}

} // namespace

AuditReport check_derham_coherence(const DeRhamFamily& fam, const QuadraticTheory& q) {
    AuditReport r;
    r.suite = "derham-coherence";
    const WindowSpace& w = fam.w;
    for (const auto& [key, f] : fam.entries) {
        LatticeSubspace u = LatticeSubspace::from_mask(w, key.u);
        LatticeSubspace up = LatticeSubspace::from_mask(w, key.up);
        for (const auto& [key2, f2] : fam.entries) {
            // quotient shrinks: fiber integration with orientation factor
            if (key2.u == key.u && (key.up & key2.up) == key.up && key2.up != key.up) {
                LatticeSubspace upp = LatticeSubspace::from_mask(w, key2.up);
                OrientedForm pushed = fiber_integrate(f, subquotient_projection(w, u, up, upp));
                OrientedForm expect = f2;
                expect.or_coeff = expect.or_coeff * Scalar::of_int(fam.orient.transition(up, upp));
                r.add("fiber", u.to_string() + "/" + up.to_string() + "->" + upp.to_string(),
                      pushed == expect, "fiber integration disagrees with the stored entry");
            }
            // U shrinks: transverse contraction + restriction + discharge
            if (key2.up == key.up && (key2.u & key.u) == key2.u && key2.u != key.u) {
                LatticeSubspace u1 = LatticeSubspace::from_mask(w, key2.u);
                LinMap incl = subquotient_injection(w, u1, u, up);
                std::vector<int> gap = gap_indices(u1, u);
                std::vector<int> strip;
                std::vector<int> model_gap = gap_indices(up, u);
                for (size_t i = 0; i < model_gap.size(); ++i)
                    if (std::find(gap.begin(), gap.end(), model_gap[i]) != gap.end())
                        strip.push_back(static_cast<int>(i));
                OrientedForm restricted = contract_restrict(f, incl, strip);
                // discharge the q-Haar transition and the sigma normalization
                Scalar factor = Scalar::sigma_pow(2 * static_cast<int>(strip.size())) *
                                q_trivialize_haar(q, u1, u).inverse();
                OrientedForm lhs{restricted.form.scaled(factor), restricted.or_coeff, {}};
                r.add("corestriction", u1.to_string() + "<=" + u.to_string() + " over " + up.to_string(),
                      lhs == f2, "transverse restriction disagrees with the stored entry");
            }
        }
    }
    return r;
}

void ComplexOfSpaces::validate() const {
    require(spaces.size() >= 1, "NotAComplex", "a complex needs at least one space");
    require(diffs.size() + 1 == spaces.size(), "NotAComplex", "one differential per consecutive pair");
    for (size_t i = 0; i < diffs.size(); ++i) {
        require(diffs[i].source == spaces[i] && diffs[i].target == spaces[i + 1], "NotAComplex",
                "differential " + std::to_string(i) + " has the wrong spaces");
        if (i + 1 < diffs.size())
            require((diffs[i + 1].mat * diffs[i].mat).is_zero(), "NotAComplex", "d o d is nonzero");
    }
}

SuperVec ComplexOfSpaces::collapse() const {
    std::vector<std::string> even_labels, odd_labels;
    for (size_t i = 0; i < spaces.size(); ++i)
        for (const auto& b : spaces[i].basis)
            (i % 2 == 0 ? even_labels : odd_labels).push_back(b + "#" + std::to_string(i));
    return SuperVec(FinVec("even", even_labels), FinVec("odd", odd_labels));
}

QMat ComplexOfSpaces::d_even_to_odd() const {
    SuperVec sup = collapse();
    QMat m(sup.odd.dim(), sup.even.dim());
    int row0 = 0, col0 = 0;
    std::vector<int> even_off(spaces.size(), 0), odd_off(spaces.size(), 0);
    for (size_t i = 0; i < spaces.size(); ++i) {
        if (i % 2 == 0) { even_off[i] = col0; col0 += spaces[i].dim(); }
        else { odd_off[i] = row0; row0 += spaces[i].dim(); }
    }
    for (size_t i = 0; i + 1 < spaces.size(); i += 2) {
        const QMat& d = diffs[i].mat; // V^{2k} -> V^{2k+1}
        for (int r = 0; r < d.rows(); ++r)
            for (int c = 0; c < d.cols(); ++c) m.at(odd_off[i + 1] + r, even_off[i] + c) = d.at(r, c);
    }
    return m;
}

QMat ComplexOfSpaces::d_odd_to_even() const {
    SuperVec sup = collapse();
    QMat m(sup.even.dim(), sup.odd.dim());
    int row0 = 0, col0 = 0;
    std::vector<int> even_off(spaces.size(), 0), odd_off(spaces.size(), 0);
    for (size_t i = 0; i < spaces.size(); ++i) {
        if (i % 2 == 0) { even_off[i] = row0; row0 += spaces[i].dim(); }
        else { odd_off[i] = col0; col0 += spaces[i].dim(); }
    }
    for (size_t i = 1; i + 1 < spaces.size(); i += 2) {
        const QMat& d = diffs[i].mat; // V^{2k+1} -> V^{2k+2}
        for (int r = 0; r < d.rows(); ++r)
            for (int c = 0; c < d.cols(); ++c) m.at(even_off[i + 1] + r, odd_off[i] + c) = d.at(r, c);
    }
    return m;
}

ComplexOfSpaces cv_complex(const FinVec& v) {
    FinVec v1(v.name + "'", v.basis);
    return ComplexOfSpaces{{v, v1}, {LinMap(v, v1, QMat::identity(v.dim()))}};
}

SuperDatum SuperDatum::from_super_measure(const SuperMeasure& m) {
    SuperDatum d;
    d.space = m.space;
    d.q = m.even_part.q;
    d.mu_coeff = m.mu_coeff;
    d.z2_grade = m.z2_grade;
    for (const auto& [s, c] : m.odd_part.terms()) {
        Polynomial p = m.even_part.p.scaled(c);
        if (!p.is_zero()) d.comps.emplace(s, p);
    }
    return d;
}

void SuperDatum::add_comp(std::vector<int> idx, const Polynomial& p) {
    if (p.is_zero()) return;
    int swaps = 0;
    for (size_t i = 1; i < idx.size(); ++i)
        for (size_t j = i; j > 0 && idx[j] < idx[j - 1]; --j) {
            std::swap(idx[j], idx[j - 1]);
            ++swaps;
        }
    for (size_t i = 0; i + 1 < idx.size(); ++i)
        if (idx[i] == idx[i + 1]) return;
    Polynomial signed_p = (swaps % 2) ? -p : p;
    auto it = comps.find(idx);
    if (it == comps.end()) {
        comps.emplace(std::move(idx), signed_p);
    } else {
        it->second = it->second + signed_p;
        if (it->second.is_zero()) comps.erase(it);
    }
}

bool SuperDatum::operator==(const SuperDatum& o) const {
    if (comps.empty() && o.comps.empty()) return space == o.space;
    if (!(space == o.space && q == o.q && z2_grade % 2 == o.z2_grade % 2)) return false;
    // compare the tensor against the mu line
    if (mu_coeff == o.mu_coeff) return comps == o.comps;
    Scalar ratio = o.mu_coeff * mu_coeff.inverse();
    if (comps.size() != o.comps.size()) return false;
    for (const auto& [s, p] : comps) {
        auto it = o.comps.find(s);
        if (it == o.comps.end() || !(p == it->second.scaled(ratio))) return false;
    }
    return true;
}

SuperDatum koszul_differential(const ComplexOfSpaces& c, const HaarTheory& h, const SuperDatum& m) {
    c.validate();
    h.validate_positive();
    SuperVec sup = c.collapse();
    require(m.space == sup, "SpaceMismatch", "datum does not live on the collapsed super space");
    QMat de = c.d_even_to_odd(); // odd x even
    QMat dobl = c.d_odd_to_even(); // even x odd
    SuperDatum out;
    out.space = m.space;
    out.q = m.q;
    out.mu_coeff = m.mu_coeff;
    out.z2_grade = m.z2_grade + 1;
    const FinVec& even = m.space.even;
    for (const auto& [s, p] : m.comps) {
        // even substitution x -> x - eps (D_o theta): derivative of the
        // density against each theta_a wedged on the left
        for (int a = 0; a < m.space.odd.dim(); ++a) {
            if (std::binary_search(s.begin(), s.end(), a)) continue;
            Polynomial acc(even);
            for (int i = 0; i < even.dim(); ++i) {
                if (dobl.at(i, a) == 0) continue;
                Polynomial dens = p.partial(i) - Polynomial::linear(even, m.q.mat().row(i)) * p;
                acc = acc + dens.scaled(Scalar::of(dobl.at(i, a)));
            }
            if (acc.is_zero()) continue;
            // theta_a wedged on the left: pass the raw word, the sort sign
            // is handled in add_comp
            std::vector<int> sa;
            sa.reserve(s.size() + 1);
            sa.push_back(a);
            sa.insert(sa.end(), s.begin(), s.end());
            out.add_comp(std::move(sa), -acc);
        }
        // odd substitution theta -> theta - eps (D_e x): left derivative
        // times the linear even factor
        for (size_t pos = 0; pos < s.size(); ++pos) {
            int a = s[pos];
            Polynomial lin(even);
            for (int j = 0; j < even.dim(); ++j)
                if (de.at(a, j) != 0) lin = lin + Polynomial::variable(even, j).scaled(Scalar::of(de.at(a, j)));
            if (lin.is_zero()) continue;
            std::vector<int> rest;
            for (int x : s)
                if (x != a) rest.push_back(x);
            Polynomial term = lin * p;
            out.add_comp(std::move(rest), (pos % 2) ? term : -term);
        }
    }
    return out;
}

SuperDatum koszul_direct_cv(const SuperDatum& m) {
    // For CV = {V --id--> V}: d = -sum_j x_j (left d/d theta_j).
    SuperDatum out;
    out.space = m.space;
    out.q = m.q;
    out.mu_coeff = m.mu_coeff;
    out.z2_grade = m.z2_grade + 1;
    const FinVec& even = m.space.even;
    for (const auto& [s, p] : m.comps)
        for (size_t pos = 0; pos < s.size(); ++pos) {
            std::vector<int> rest;
            for (int x : s)
                if (x != s[pos]) rest.push_back(x);
            Polynomial term = Polynomial::variable(even, s[pos]) * p;
            out.add_comp(std::move(rest), (pos % 2) ? term : -term);
        }
    return out;
}

} // namespace semimeasure
