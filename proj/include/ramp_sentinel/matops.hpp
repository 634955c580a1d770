#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ramp {

// ============================================================================
// Small dense matrices
// ============================================================================

// Dense rectangular matrix, row-major. Sized for hand-assembled blocks of a
// few rows, not for large linear algebra.
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols, 0.0) {}
    Mat(int rows, int cols, std::initializer_list<double> vals);

    [[nodiscard]] static Mat identity(int n);

    [[nodiscard]] int rows() const { return rows_; }
    [[nodiscard]] int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

[[nodiscard]] Mat operator*(const Mat& a, const Mat& b);
[[nodiscard]] Mat operator+(const Mat& a, const Mat& b);
[[nodiscard]] Mat operator-(const Mat& a, const Mat& b);
[[nodiscard]] Mat operator*(double s, const Mat& a);
[[nodiscard]] Mat transpose(const Mat& a);

// ============================================================================
// Symmetric matrices
// ============================================================================

// Dense symmetric matrix, row-major full storage. set()/add() write an entry
// and its mirror, so callers only ever touch the upper triangle.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int n) : n_(n), a_(std::size_t(n) * n, 0.0) {}

    [[nodiscard]] int dim() const { return n_; }

    [[nodiscard]] double operator()(int i, int j) const { return a_[std::size_t(i) * n_ + j]; }

    void set(int i, int j, double v) {
        a_[std::size_t(i) * n_ + j] = v;
        a_[std::size_t(j) * n_ + i] = v;
    }
    void add(int i, int j, double v) {
        a_[std::size_t(i) * n_ + j] += v;
        if (i != j) a_[std::size_t(j) * n_ + i] += v;
    }

    [[nodiscard]] double frobenius_norm() const;

    [[nodiscard]] const double* data() const { return a_.data(); }

private:
    int n_ = 0;
    std::vector<double> a_;
};

[[nodiscard]] SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
[[nodiscard]] SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
[[nodiscard]] SymMatrix operator*(double s, const SymMatrix& a);

// One block of a block-banded symmetric matrix. Bands index the diagonal
// partition; only row_band <= col_band entries are accepted.
struct Block {
    int row_band = 0;
    int col_band = 0;
    Mat m;
};

// Assembles a symmetric matrix from band sizes and an upper-triangular list
// of blocks. Omitted blocks are zero. Throws std::invalid_argument naming the
// offending band pair on any dimension mismatch, and when a diagonal block is
// not symmetric.
[[nodiscard]] SymMatrix assemble_blocks(std::span<const int> band_sizes,
                                        std::span<const Block> blocks);

// ============================================================================
// Definiteness and eigenvalues
// ============================================================================

// Lower-triangular Cholesky factor of m, row-major in `lower`. Returns false
// (instead of throwing) when m is not positive definite; this is the total
// function the definiteness checks are built on.
[[nodiscard]] bool cholesky_factor(const SymMatrix& m, std::vector<double>& lower);

// True iff m + margin*I is negative definite, i.e. every eigenvalue of m is
// below -margin. Decided by attempting a Cholesky factorization of
// -(m + margin*I).
[[nodiscard]] bool is_negative_definite(const SymMatrix& m, double margin);

// True iff m - margin*I is positive definite.
[[nodiscard]] bool is_positive_definite(const SymMatrix& m, double margin);

// All eigenvalues, sorted ascending, via cyclic Jacobi rotations. Iterates
// until the off-diagonal Frobenius norm falls below 1e-10 * ||m||_F, with a
// hard budget of 100 sweeps. Reference oracle for the Cholesky-based checks;
// not used on any hot path.
[[nodiscard]] std::vector<double> eigenvalue_oracle(const SymMatrix& m);

}  // namespace ramp
