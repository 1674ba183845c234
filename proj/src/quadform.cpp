#include "semimeasure/quadform.hpp"

#include <sstream>

namespace semimeasure {

SymBilForm::SymBilForm(FinVec s, QMat m) : space(std::move(s)), mat(std::move(m)) {
    require(mat.rows() == space.dim() && mat.cols() == space.dim(), "BadMatrix",
            "form matrix shape does not match space " + space.name);
    require(mat.is_symmetric(), "NotSymmetric", "form matrix is not symmetric");
}

QQ SymBilForm::eval(const std::vector<QQ>& x, const std::vector<QQ>& y) const {
    require(static_cast<int>(x.size()) == space.dim() && static_cast<int>(y.size()) == space.dim(),
            "BadMatrix", "form argument length mismatch");
    QQ s(0);
    for (int i = 0; i < space.dim(); ++i)
        for (int j = 0; j < space.dim(); ++j)
            if (mat.at(i, j) != 0) s += x[i] * mat.at(i, j) * y[j];
    return s;
}

bool is_positive_definite(const SymBilForm& b) {
    int n = b.space.dim();
    std::vector<int> idx;
    for (int k = 1; k <= n; ++k) {
        idx.push_back(k - 1);
        if (b.mat.submatrix(idx, idx).det() <= 0) return false;
    }
    return true;
}

bool is_positive_semidefinite(const QMat& m) {
    if (!m.is_symmetric()) return false;
    QMat a = m;
    int n = a.rows();
    // Symmetric elimination: a zero pivot forces a zero row/column, a
    // negative pivot disproves semidefiniteness.
    std::vector<bool> done(n, false);
    for (int step = 0; step < n; ++step) {
        int p = -1;
        for (int i = 0; i < n; ++i)
            if (!done[i] && a.at(i, i) != 0) { p = i; break; }
        if (p < 0) {
            for (int i = 0; i < n; ++i) {
                if (done[i]) continue;
                for (int j = 0; j < n; ++j)
                    if (!done[j] && a.at(i, j) != 0) return false;
            }
            return true;
        }
        if (a.at(p, p) < 0) return false;
        QQ inv = 1 / a.at(p, p);
        for (int i = 0; i < n; ++i) {
            if (done[i] || i == p || a.at(i, p) == 0) continue;
            QQ f = a.at(i, p) * inv;
            for (int j = 0; j < n; ++j)
                if (!done[j]) a.at(i, j) -= f * a.at(p, j);
        }
        for (int j = 0; j < n; ++j) {
            if (j != p) { a.at(p, j) = 0; a.at(j, p) = 0; }
        }
        done[p] = true;
    }
    return true;
}

PosDefForm::PosDefForm(SymBilForm form) : b(std::move(form)) {
    require(is_positive_definite(b), "NotPositiveDefinite",
            "form on " + b.space.name + " is not positive definite");
}

std::string haar_line_of_labels(const std::vector<std::string>& labels) {
    std::ostringstream os;
    os << "|det(";
    for (size_t i = 0; i < labels.size(); ++i) os << (i ? "," : "") << labels[i];
    os << ")^*|";
    return os.str();
}

std::string haar_line_of(const FinVec& space) { return haar_line_of_labels(space.basis); }

PosDefForm restrict_form(const PosDefForm& b, const LinMap& alpha) {
    require(alpha.target == b.space(), "SpaceMismatch", "restriction target is not the form's space");
    require(alpha.is_injective(), "NotInjective", "restriction along a non-injective map");
    QMat m = alpha.mat.transpose() * b.mat() * alpha.mat;
    return PosDefForm(SymBilForm(alpha.source, m));
}

std::pair<QMat, QMat> orthogonal_splitting(const PosDefForm& b, const LinMap& beta) {
    require(beta.source == b.space(), "SpaceMismatch", "pushforward source is not the form's space");
    require(beta.is_surjective(), "NotSurjective", "pushforward along a non-surjective map");
    QMat K = beta.mat.kernel_basis();
    // b-orthogonal complement of the kernel: null space of K^t B.
    QMat C = K.cols() == 0 ? QMat::identity(b.dim()) : (K.transpose() * b.mat()).kernel_basis();
    QMat L = beta.mat * C;
    QMat S = C * L.inverse(); // beta * S = id, columns b-orthogonal to K
    return {K, S};
}

PosDefForm pushforward_form(const PosDefForm& b, const LinMap& beta) {
    auto [K, S] = orthogonal_splitting(b, beta);
    // The splitting is b-orthogonal, so the Schur complement of the
    // kernel block is just the Gram matrix of the section.
    QMat m = S.transpose() * b.mat() * S;
    return PosDefForm(SymBilForm(beta.target, m));
}

PosDefForm pushforward_form_via_inverse(const PosDefForm& b, const LinMap& beta) {
    require(beta.source == b.space(), "SpaceMismatch", "pushforward source is not the form's space");
    require(beta.is_surjective(), "NotSurjective", "pushforward along a non-surjective map");
    // ((beta^t)^* (b^{-1}))^{-1}, with beta^t the injection dual to beta.
    QMat inner = beta.mat * b.mat().inverse() * beta.mat.transpose();
    return PosDefForm(SymBilForm(beta.target, inner.inverse()));
}

PosDefForm inverse_form(const PosDefForm& b) {
    if (b.dim() == 0) return PosDefForm(SymBilForm(dual_space(b.space()), QMat(0, 0)));
    return PosDefForm(SymBilForm(dual_space(b.space()), b.mat().inverse()));
}

HaarVolume induced_haar(const PosDefForm& b) {
    QQ d = b.dim() == 0 ? QQ(1) : b.mat().det();
    return HaarVolume{haar_line_of(b.space()), Scalar::sqrt_rational(d)};
}

std::pair<QMat, QMat> orthocomplement_sections(const PosDefForm& b, const LinMap& alpha) {
    require(alpha.target == b.space(), "SpaceMismatch", "injection target is not the form's space");
    require(alpha.is_injective(), "NotInjective", "orthocomplement of a non-injective image");
    auto [quo, proj] = cokernel(alpha);
    QMat Oc = alpha.source.dim() == 0 ? QMat::identity(b.dim())
                                      : (alpha.mat.transpose() * b.mat()).kernel_basis();
    if (quo.dim() == 0) return {QMat(b.dim(), 0), QMat(0, 0)};
    QMat P = proj.mat * Oc; // invertible: complement maps isomorphically onto cokernel
    QMat N = Oc * P.inverse();
    QMat G = N.transpose() * b.mat() * N;
    return {N, G};
}

} // namespace semimeasure
