#include "semimeasure/rational.hpp"

#include <sstream>

namespace semimeasure {

QQ parse_rational(const std::string& s) {
    if (s.empty()) fail("BadRational", "empty rational literal");
    for (char c : s) {
        if (!(c == '-' || c == '/' || (c >= '0' && c <= '9')))
            fail("BadRational", "bad character in rational literal '" + s + "'");
    }
    QQ q;
    if (q.set_str(s, 10) != 0) fail("BadRational", "unparsable rational '" + s + "'");
    q.canonicalize();
    return q;
}

std::string rational_to_string(const QQ& q) {
    return q.get_str();
}

QMat QMat::identity(int n) {
    QMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

QMat QMat::from_rows(const std::vector<std::vector<QQ>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
    QMat m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c) fail("BadMatrix", "ragged rows");
        for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

QMat QMat::operator*(const QMat& o) const {
    require(cols_ == o.rows_, "BadMatrix", "dimension mismatch in product");
    QMat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const QQ& x = at(i, k);
            if (x == 0) continue;
            for (int j = 0; j < o.cols_; ++j) r.at(i, j) += x * o.at(k, j);
        }
    return r;
}

QMat QMat::operator+(const QMat& o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, "BadMatrix", "dimension mismatch in sum");
    QMat r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
    return r;
}

QMat QMat::operator-(const QMat& o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, "BadMatrix", "dimension mismatch in difference");
    QMat r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
    return r;
}

QMat QMat::scaled(const QQ& c) const {
    QMat r = *this;
    for (auto& x : r.a_) x *= c;
    return r;
}

QMat QMat::transpose() const {
    QMat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

bool QMat::is_zero() const {
    for (const auto& x : a_)
        if (x != 0) return false;
    return true;
}

bool QMat::is_symmetric() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = i + 1; j < cols_; ++j)
            if (at(i, j) != at(j, i)) return false;
    return true;
}

std::vector<QQ> QMat::apply(const std::vector<QQ>& v) const {
    require(static_cast<int>(v.size()) == cols_, "BadMatrix", "vector length mismatch");
    std::vector<QQ> r(rows_, QQ(0));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (at(i, j) != 0) r[i] += at(i, j) * v[j];
    return r;
}

QMat QMat::submatrix(const std::vector<int>& row_idx, const std::vector<int>& col_idx) const {
    QMat r(static_cast<int>(row_idx.size()), static_cast<int>(col_idx.size()));
    for (size_t i = 0; i < row_idx.size(); ++i)
        for (size_t j = 0; j < col_idx.size(); ++j) r.at(static_cast<int>(i), static_cast<int>(j)) = at(row_idx[i], col_idx[j]);
    return r;
}

QMat QMat::hcat(const QMat& o) const {
    require(rows_ == o.rows_, "BadMatrix", "hcat row mismatch");
    QMat r(rows_, cols_ + o.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
        for (int j = 0; j < o.cols_; ++j) r.at(i, cols_ + j) = o.at(i, j);
    }
    return r;
}

QMat QMat::vcat(const QMat& o) const {
    require(cols_ == o.cols_, "BadMatrix", "vcat column mismatch");
    QMat r(rows_ + o.rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
    for (int i = 0; i < o.rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(rows_ + i, j) = o.at(i, j);
    return r;
}

std::vector<QQ> QMat::col(int j) const {
    std::vector<QQ> v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = at(i, j);
    return v;
}

std::vector<QQ> QMat::row(int i) const {
    std::vector<QQ> v(cols_);
    for (int j = 0; j < cols_; ++j) v[j] = at(i, j);
    return v;
}

std::vector<int> QMat::rref() {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < cols_ && r < rows_; ++c) {
        int p = -1;
        for (int i = r; i < rows_; ++i)
            if (at(i, c) != 0) { p = i; break; }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < cols_; ++j) std::swap(at(p, j), at(r, j));
        QQ inv = 1 / at(r, c);
        for (int j = 0; j < cols_; ++j) at(r, j) *= inv;
        for (int i = 0; i < rows_; ++i) {
            if (i == r || at(i, c) == 0) continue;
            QQ f = at(i, c);
            for (int j = 0; j < cols_; ++j) at(i, j) -= f * at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

int QMat::rank() const {
    QMat m = *this;
    return static_cast<int>(m.rref().size());
}

QQ QMat::det() const {
    require(rows_ == cols_, "BadMatrix", "determinant of non-square matrix");
    QMat m = *this;
    QQ d(1);
    for (int c = 0; c < cols_; ++c) {
        int p = -1;
        for (int i = c; i < rows_; ++i)
            if (m.at(i, c) != 0) { p = i; break; }
        if (p < 0) return QQ(0);
        if (p != c) {
            for (int j = 0; j < cols_; ++j) std::swap(m.at(p, j), m.at(c, j));
            d = -d;
        }
        d *= m.at(c, c);
        QQ inv = 1 / m.at(c, c);
        for (int i = c + 1; i < rows_; ++i) {
            if (m.at(i, c) == 0) continue;
            QQ f = m.at(i, c) * inv;
            for (int j = c; j < cols_; ++j) m.at(i, j) -= f * m.at(c, j);
        }
    }
    return d;
}

QMat QMat::inverse() const {
    require(rows_ == cols_, "BadMatrix", "inverse of non-square matrix");
    QMat aug = hcat(identity(rows_));
    auto pivots = aug.rref();
    require(static_cast<int>(pivots.size()) == rows_ && (pivots.empty() || pivots.back() < rows_),
            "SingularMatrix", "matrix is not invertible");
    std::vector<int> all_rows(rows_), right(rows_);
    for (int i = 0; i < rows_; ++i) { all_rows[i] = i; right[i] = rows_ + i; }
    return aug.submatrix(all_rows, right);
}

QMat QMat::kernel_basis() const {
    QMat m = *this;
    auto pivots = m.rref();
    std::vector<bool> is_pivot(cols_, false);
    for (int p : pivots) is_pivot[p] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < cols_; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    QMat k(cols_, static_cast<int>(free_cols.size()));
    for (size_t f = 0; f < free_cols.size(); ++f) {
        int fc = free_cols[f];
        k.at(fc, static_cast<int>(f)) = 1;
        for (size_t r = 0; r < pivots.size(); ++r) k.at(pivots[r], static_cast<int>(f)) = -m.at(static_cast<int>(r), fc);
    }
    return k;
}

std::vector<QQ> QMat::solve(const std::vector<QQ>& b) const {
    require(static_cast<int>(b.size()) == rows_, "BadMatrix", "rhs length mismatch");
    QMat rhs(rows_, 1);
    for (int i = 0; i < rows_; ++i) rhs.at(i, 0) = b[i];
    QMat aug = hcat(rhs);
    auto pivots = aug.rref();
    for (size_t r = 0; r < pivots.size(); ++r)
        if (pivots[r] == cols_) fail("Inconsistent", "linear system has no solution");
    std::vector<QQ> x(cols_, QQ(0));
    for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(static_cast<int>(r), cols_);
    return x;
}

std::string QMat::to_string() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows_; ++i) {
        os << (i ? ", [" : "[");
        for (int j = 0; j < cols_; ++j) os << (j ? ", " : "") << at(i, j).get_str();
        os << "]";
    }
    os << "]";
    return os.str();
}

QMat outer_identity_rows(const std::vector<int>& idx, int n) {
    QMat m(static_cast<int>(idx.size()), n);
    for (size_t i = 0; i < idx.size(); ++i) m.at(static_cast<int>(i), idx[i]) = 1;
    return m;
}

} // namespace semimeasure
