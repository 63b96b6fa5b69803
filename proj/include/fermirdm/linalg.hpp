#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fermirdm::linalg {

/// Dense column-major matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    std::span<double> column(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
    std::span<const double> column(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct EigenResult {
    std::vector<double> values;  ///< all eigenvalues
    Matrix vectors;              ///< eigenvectors for the first vectors.cols() entries of values
};

/// Eigenvalues of a real symmetric matrix in decreasing order, with
/// eigenvectors for the n_vectors largest. Only the lower triangle is read.
EigenResult eigh_descending(Matrix a, std::size_t n_vectors);

/// Lowest `count` eigenpairs of a symmetric tridiagonal matrix, ascending.
/// `values` holds only those `count` eigenvalues.
EigenResult tridiagonal_lowest(std::span<const double> diag, std::span<const double> offdiag,
                               std::size_t count);

/// Eigenvalues (ascending) and first eigenvector components of a symmetric
/// tridiagonal matrix by implicit QL. Used for Golub-Welsch quadrature.
struct TridiagonalSpectrum {
    std::vector<double> values;
    std::vector<double> first_components;
};
TridiagonalSpectrum tridiagonal_ql(std::vector<double> diag, std::vector<double> offdiag);

}  // namespace fermirdm::linalg
