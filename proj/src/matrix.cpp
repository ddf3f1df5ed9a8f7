#include "pir2/matrix.hpp"

#include "pir2/errors.hpp"

namespace pir2 {

namespace {

// row[j] -= factor * row[i] over the half-open column range [from, cols).
void eliminate_row(std::uint64_t* dst, const std::uint64_t* src,
                   std::uint64_t factor, std::size_t from, std::size_t cols,
                   const Field& f) {
    if (factor == 0) return;
    for (std::size_t c = from; c < cols; ++c)
        dst[c] = f.sub(dst[c], f.mul(factor, src[c]));
}

}  // namespace

std::size_t rank(Matrix m, const Field& f) {
    const std::size_t rows = m.rows(), cols = m.cols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && m.at(pivot, c) == 0) ++pivot;
        if (pivot == rows) continue;
        if (pivot != r)
            for (std::size_t j = c; j < cols; ++j)
                std::swap(m.at(pivot, j), m.at(r, j));
        const std::uint64_t piv_inv = f.inv(m.at(r, c));
        for (std::size_t i = r + 1; i < rows; ++i) {
            const std::uint64_t factor = f.mul(m.at(i, c), piv_inv);
            eliminate_row(m.row(i), m.row(r), factor, c, cols, f);
        }
        ++r;
    }
    return r;
}

Matrix mat_mul(const Matrix& a, const Matrix& b, const Field& f) {
    if (a.cols() != b.rows()) throw ParamError("matrix product shape mismatch");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const std::uint64_t v = a.at(i, k);
            if (v == 0) continue;
            const std::uint64_t* brow = b.row(k);
            std::uint64_t* orow = out.row(i);
            for (std::size_t j = 0; j < b.cols(); ++j)
                orow[j] = f.add(orow[j], f.mul(v, brow[j]));
        }
    }
    return out;
}

std::vector<std::uint64_t> mat_vec(const Matrix& a,
                                   std::span<const std::uint64_t> x,
                                   const Field& f) {
    if (a.cols() != x.size()) throw ParamError("matrix-vector shape mismatch");
    std::vector<std::uint64_t> out(a.rows(), 0);
    const bool small = a.cols() > 0 && f.modulus() < (1ULL << 31);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const std::uint64_t* row = a.row(i);
        if (small) {
            unsigned __int128 acc = 0;
            for (std::size_t j = 0; j < a.cols(); ++j)
                acc += static_cast<unsigned __int128>(row[j]) * x[j];
            out[i] = static_cast<std::uint64_t>(acc % f.modulus());
        } else {
            std::uint64_t acc = 0;
            for (std::size_t j = 0; j < a.cols(); ++j)
                acc = f.add(acc, f.mul(row[j], x[j]));
            out[i] = acc;
        }
    }
    return out;
}

Matrix solve_square(const Matrix& a, const Matrix& b, const Field& f) {
    if (a.rows() != a.cols()) throw ParamError("solve_square needs a square matrix");
    if (a.rows() != b.rows()) throw ParamError("solve_square shape mismatch");
    const std::size_t n = a.rows(), w = b.cols();
    Matrix m = a, x = b;
    // Forward elimination with partial pivoting (any nonzero pivot works in a
    // finite field).
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        while (pivot < n && m.at(pivot, c) == 0) ++pivot;
        if (pivot == n) throw SingularMatrixError("singular system");
        if (pivot != c) {
            for (std::size_t j = c; j < n; ++j)
                std::swap(m.at(pivot, j), m.at(c, j));
            for (std::size_t j = 0; j < w; ++j)
                std::swap(x.at(pivot, j), x.at(c, j));
        }
        const std::uint64_t piv_inv = f.inv(m.at(c, c));
        for (std::size_t i = c + 1; i < n; ++i) {
            const std::uint64_t factor = f.mul(m.at(i, c), piv_inv);
            if (factor == 0) continue;
            eliminate_row(m.row(i), m.row(c), factor, c, n, f);
            eliminate_row(x.row(i), x.row(c), factor, 0, w, f);
        }
    }
    // Back substitution.
    for (std::size_t ci = n; ci-- > 0;) {
        const std::uint64_t piv_inv = f.inv(m.at(ci, ci));
        for (std::size_t j = 0; j < w; ++j)
            x.at(ci, j) = f.mul(x.at(ci, j), piv_inv);
        for (std::size_t i = 0; i < ci; ++i) {
            const std::uint64_t factor = m.at(i, ci);
            if (factor == 0) continue;
            for (std::size_t j = 0; j < w; ++j)
                x.at(i, j) = f.sub(x.at(i, j), f.mul(factor, x.at(ci, j)));
        }
    }
    return x;
}

Matrix inverse(const Matrix& a, const Field& f) {
    return solve_square(a, Matrix::identity(a.rows()), f);
}

Matrix random_full_rank(std::size_t dim, const Field& f, SplitMix64& rng) {
    if (dim == 0) throw ParamError("random_full_rank needs dim >= 1");
    for (;;) {
        Matrix m(dim, dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) m.at(i, j) = f.random(rng);
        if (rank(m, f) == dim) return m;
    }
}

}  // namespace pir2
