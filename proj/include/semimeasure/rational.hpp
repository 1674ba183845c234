#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "semimeasure/error.hpp"

namespace semimeasure {

using QQ = mpq_class;
using ZZ = mpz_class;

QQ parse_rational(const std::string& s);
std::string rational_to_string(const QQ& q);

// Dense matrix over QQ.  Everything downstream (kernels, Schur
// complements, cocycles) runs through this class, so it stays exact.
class QMat {
public:
    QMat() : rows_(0), cols_(0) {}
    QMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, QQ(0)) {}

    static QMat identity(int n);
    static QMat zero(int rows, int cols) { return QMat(rows, cols); }
    static QMat from_rows(const std::vector<std::vector<QQ>>& rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    QQ& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const QQ& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    QMat operator*(const QMat& o) const;
    QMat operator+(const QMat& o) const;
    QMat operator-(const QMat& o) const;
    QMat scaled(const QQ& c) const;
    QMat transpose() const;

    bool operator==(const QMat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
    bool operator!=(const QMat& o) const { return !(*this == o); }

    bool is_zero() const;
    bool is_symmetric() const;

    std::vector<QQ> apply(const std::vector<QQ>& v) const;

    QMat submatrix(const std::vector<int>& row_idx, const std::vector<int>& col_idx) const;
    QMat hcat(const QMat& o) const;
    QMat vcat(const QMat& o) const;
    std::vector<QQ> col(int j) const;
    std::vector<QQ> row(int i) const;

    // Reduced row echelon form in place; returns pivot column indices.
    std::vector<int> rref();

    int rank() const;
    QQ det() const;
    QMat inverse() const;

    // Basis of the right null space, one column per basis vector.  Free
    // coordinates are set to 1, pivot coordinates filled by back
    // substitution; column order follows ascending free-column index.
    QMat kernel_basis() const;

    // Solves A x = b; fails with code when inconsistent.
    std::vector<QQ> solve(const std::vector<QQ>& b) const;

    std::string to_string() const;

private:
    int rows_, cols_;
    std::vector<QQ> a_;
};

QMat outer_identity_rows(const std::vector<int>& idx, int n); // rows of I_n selected by idx

} // namespace semimeasure
