#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pir2/field.hpp"

namespace pir2 {

// Dense row-major matrix over F_q. The field context is passed to the
// operations rather than stored, so matrices stay plain data.
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), e_(rows * cols, 0) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::uint64_t& at(std::size_t r, std::size_t c) { return e_[r * cols_ + c]; }
    std::uint64_t at(std::size_t r, std::size_t c) const {
        return e_[r * cols_ + c];
    }

    std::uint64_t* row(std::size_t r) { return e_.data() + r * cols_; }
    const std::uint64_t* row(std::size_t r) const {
        return e_.data() + r * cols_;
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }

  private:
    std::size_t rows_, cols_;
    std::vector<std::uint64_t> e_;
};

// Rank over F_q by Gaussian elimination; 0 for an empty matrix.
std::size_t rank(Matrix m, const Field& f);

Matrix mat_mul(const Matrix& a, const Matrix& b, const Field& f);

std::vector<std::uint64_t> mat_vec(const Matrix& a,
                                   std::span<const std::uint64_t> x,
                                   const Field& f);

// Solves a*x = b for square invertible a; throws SingularMatrixError.
Matrix solve_square(const Matrix& a, const Matrix& b, const Field& f);

Matrix inverse(const Matrix& a, const Field& f);

// Uniform over all dim x dim full-rank matrices, by rejection sampling of
// uniform matrices. Expected rejections are below one for q >= 5.
Matrix random_full_rank(std::size_t dim, const Field& f, SplitMix64& rng);

}  // namespace pir2
