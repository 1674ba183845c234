#include "semimeasure/linalg.hpp"

#include <set>

namespace semimeasure {

FinVec::FinVec(std::string n, std::vector<std::string> b) : name(std::move(n)), basis(std::move(b)) {
    std::set<std::string> seen(basis.begin(), basis.end());
    require(seen.size() == basis.size(), "DuplicateLabel", "basis labels of '" + name + "' are not distinct");
}

FinVec FinVec::coordinate(const std::string& name, int dim, const std::string& stem) {
    std::vector<std::string> labels;
    labels.reserve(dim);
    for (int i = 0; i < dim; ++i) labels.push_back(stem + std::to_string(i));
    return FinVec(name, labels);
}

FinVec dual_space(const FinVec& v) {
    std::vector<std::string> labels;
    labels.reserve(v.basis.size());
    for (const auto& b : v.basis) labels.push_back(b + "*");
    return FinVec(v.name + "*", labels);
}

LinMap::LinMap(FinVec s, FinVec t, QMat m) : source(std::move(s)), target(std::move(t)), mat(std::move(m)) {
    require(mat.rows() == target.dim() && mat.cols() == source.dim(), "BadMatrix",
            "matrix shape does not match declared spaces of map " + source.name + " -> " + target.name);
}

LinMap LinMap::identity(const FinVec& v) { return LinMap(v, v, QMat::identity(v.dim())); }

LinMap LinMap::compose(const LinMap& first) const {
    require(first.target == source, "SpaceMismatch",
            "composition mismatch: " + first.target.name + " vs " + source.name);
    return LinMap(first.source, target, mat * first.mat);
}

LinMap LinMap::inverse() const {
    require(is_iso(), "SingularMatrix", "map is not invertible");
    return LinMap(target, source, mat.inverse());
}

std::pair<FinVec, LinMap> kernel(const LinMap& m) {
    QMat k = m.mat.kernel_basis();
    FinVec ker = FinVec::coordinate("ker(" + m.source.name + "->" + m.target.name + ")", k.cols(), "k");
    return {ker, LinMap(ker, m.source, k)};
}

namespace {

// RREF of the image (columns of m viewed as row vectors in the target),
// plus the pivot coordinate set.
std::pair<QMat, std::vector<int>> image_rref(const LinMap& m) {
    QMat rows = m.mat.transpose();
    auto pivots = rows.rref();
    return {rows, pivots};
}

} // namespace

std::vector<std::string> cokernel_complement_labels(const LinMap& m) {
    auto [rows, pivots] = image_rref(m);
    std::set<int> piv(pivots.begin(), pivots.end());
    std::vector<std::string> labels;
    for (int j = 0; j < m.target.dim(); ++j)
        if (!piv.count(j)) labels.push_back(m.target.basis[j]);
    return labels;
}

std::pair<FinVec, LinMap> cokernel(const LinMap& m) {
    auto [rows, pivots] = image_rref(m);
    std::set<int> piv(pivots.begin(), pivots.end());
    std::vector<int> complement;
    for (int j = 0; j < m.target.dim(); ++j)
        if (!piv.count(j)) complement.push_back(j);
    std::vector<std::string> labels;
    for (int j : complement) labels.push_back(m.target.basis[j]);
    FinVec quo(m.target.name + "/" + m.source.name, labels);
    // Project each target coordinate: reduce modulo the image, read off
    // the complement coordinates.
    QMat proj(static_cast<int>(complement.size()), m.target.dim());
    for (int j = 0; j < m.target.dim(); ++j) {
        std::vector<QQ> v(m.target.dim(), QQ(0));
        v[j] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) {
            QQ f = v[pivots[r]];
            if (f == 0) continue;
            for (int c = 0; c < m.target.dim(); ++c) v[c] -= f * rows.at(static_cast<int>(r), c);
        }
        for (size_t q = 0; q < complement.size(); ++q) proj.at(static_cast<int>(q), j) = v[complement[q]];
    }
    return {quo, LinMap(m.target, quo, proj)};
}

LinMap dual_map(const LinMap& m) {
    return LinMap(dual_space(m.target), dual_space(m.source), m.mat.transpose());
}

void ShortExactSeq::validate() const {
    require(alpha.target == beta.source, "NotExact", "middle spaces disagree");
    require(alpha.is_injective(), "NotExact", "alpha is not injective");
    require(beta.is_surjective(), "NotExact", "beta is not surjective");
    require((beta.mat * alpha.mat).is_zero(), "NotExact", "beta o alpha is nonzero");
    require(alpha.source.dim() + beta.target.dim() == alpha.target.dim(), "NotExact",
            "dimension count fails, image != kernel");
}

bool check_cartesian(const CartesianSquare& sq) {
    if (!(sq.alpha2.source == sq.W && sq.alpha2.target == sq.W1)) return false;
    if (!(sq.beta2.source == sq.W && sq.beta2.target == sq.W2)) return false;
    if (!(sq.beta1.source == sq.W1 && sq.beta1.target == sq.W12)) return false;
    if (!(sq.alpha1.source == sq.W2 && sq.alpha1.target == sq.W12)) return false;
    if (sq.beta1.mat * sq.alpha2.mat != sq.alpha1.mat * sq.beta2.mat) return false;
    if (!sq.alpha1.is_injective() || !sq.alpha2.is_injective()) return false;
    if (!sq.beta1.is_surjective() || !sq.beta2.is_surjective()) return false;
    if (sq.W.dim() != sq.W1.dim() + sq.W2.dim() - sq.W12.dim()) return false;
    // (alpha2, beta2) must embed W as the kernel of (beta1, -alpha1);
    // with the checks above this reduces to joint injectivity.
    QMat stacked = sq.alpha2.mat.vcat(sq.beta2.mat);
    return stacked.rank() == sq.W.dim();
}

CartesianSquare pullback_square(const LinMap& beta1, const LinMap& alpha1) {
    require(beta1.target == alpha1.target, "SpaceMismatch", "pullback legs have different targets");
    require(beta1.is_surjective(), "NotSurjective", "beta1 must be surjective");
    require(alpha1.is_injective(), "NotInjective", "alpha1 must be injective");
    int n1 = beta1.source.dim(), n2 = alpha1.source.dim();
    QMat combined = beta1.mat.hcat(alpha1.mat.scaled(QQ(-1)));
    QMat k = combined.kernel_basis();
    FinVec W = FinVec::coordinate("pb(" + beta1.source.name + "," + alpha1.source.name + ")", k.cols(), "p");
    std::vector<int> top(n1), bottom(n2);
    for (int i = 0; i < n1; ++i) top[i] = i;
    for (int i = 0; i < n2; ++i) bottom[i] = n1 + i;
    std::vector<int> all_cols(k.cols());
    for (int i = 0; i < k.cols(); ++i) all_cols[i] = i;
    CartesianSquare sq;
    sq.W = W;
    sq.W1 = beta1.source;
    sq.W2 = alpha1.source;
    sq.W12 = beta1.target;
    sq.alpha2 = LinMap(W, beta1.source, k.submatrix(top, all_cols));
    sq.beta2 = LinMap(W, alpha1.source, k.submatrix(bottom, all_cols));
    sq.beta1 = beta1;
    sq.alpha1 = alpha1;
    return sq;
}

} // namespace semimeasure
