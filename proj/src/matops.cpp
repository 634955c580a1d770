#include "ramp_sentinel/matops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ramp {

Mat::Mat(int rows, int cols, std::initializer_list<double> vals) : Mat(rows, cols) {
    if (static_cast<std::size_t>(rows) * cols != vals.size())
        throw std::invalid_argument("Mat initializer size does not match dimensions");
    std::copy(vals.begin(), vals.end(), a_.begin());
}

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("Mat product dimension mismatch");
    Mat c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Mat operator+(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("Mat sum dimension mismatch");
    Mat c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

Mat operator-(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("Mat difference dimension mismatch");
    Mat c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

Mat operator*(double s, const Mat& a) {
    Mat c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
    return c;
}

Mat transpose(const Mat& a) {
    Mat c(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(j, i) = a(i, j);
    return c;
}

double SymMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("SymMatrix sum dimension mismatch");
    SymMatrix c(a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = i; j < a.dim(); ++j) c.set(i, j, a(i, j) + b(i, j));
    return c;
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("SymMatrix difference dimension mismatch");
    SymMatrix c(a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = i; j < a.dim(); ++j) c.set(i, j, a(i, j) - b(i, j));
    return c;
}

SymMatrix operator*(double s, const SymMatrix& a) {
    SymMatrix c(a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = i; j < a.dim(); ++j) c.set(i, j, s * a(i, j));
    return c;
}

SymMatrix assemble_blocks(std::span<const int> band_sizes, std::span<const Block> blocks) {
    const int nbands = static_cast<int>(band_sizes.size());
    std::vector<int> offset(nbands + 1, 0);
    for (int b = 0; b < nbands; ++b) {
        if (band_sizes[b] <= 0) throw std::invalid_argument("band sizes must be positive");
        offset[b + 1] = offset[b] + band_sizes[b];
    }

    SymMatrix m(offset[nbands]);
    for (const Block& blk : blocks) {
        const int r = blk.row_band;
        const int c = blk.col_band;
        if (r < 0 || c < 0 || r >= nbands || c >= nbands || r > c)
            throw std::invalid_argument("block (" + std::to_string(r) + "," + std::to_string(c) +
                                        ") is outside the upper-triangular band grid");
        if (blk.m.rows() != band_sizes[r] || blk.m.cols() != band_sizes[c])
            throw std::invalid_argument(
                "block (" + std::to_string(r) + "," + std::to_string(c) + ") is " +
                std::to_string(blk.m.rows()) + "x" + std::to_string(blk.m.cols()) +
                ", band sizes want " + std::to_string(band_sizes[r]) + "x" +
                std::to_string(band_sizes[c]));
        if (r == c) {
            for (int i = 0; i < blk.m.rows(); ++i)
                for (int j = i + 1; j < blk.m.cols(); ++j)
                    if (blk.m(i, j) != blk.m(j, i))
                        throw std::invalid_argument("diagonal block (" + std::to_string(r) + "," +
                                                    std::to_string(r) + ") is not symmetric");
        }
        for (int i = 0; i < blk.m.rows(); ++i)
            for (int j = (r == c ? i : 0); j < blk.m.cols(); ++j)
                m.set(offset[r] + i, offset[c] + j, blk.m(i, j));
    }
    return m;
}

bool cholesky_factor(const SymMatrix& m, std::vector<double>& lower) {
    const int n = m.dim();
    lower.assign(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = m(i, j);
            for (int k = 0; k < j; ++k) s -= lower[std::size_t(i) * n + k] * lower[std::size_t(j) * n + k];
            if (i == j) {
                if (!(s > 0.0)) return false;  // also rejects NaN
                lower[std::size_t(i) * n + i] = std::sqrt(s);
            } else {
                lower[std::size_t(i) * n + j] = s / lower[std::size_t(j) * n + j];
            }
        }
    }
    return true;
}

bool is_negative_definite(const SymMatrix& m, double margin) {
    const int n = m.dim();
    SymMatrix neg(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) neg.set(i, j, -(m(i, j) + (i == j ? margin : 0.0)));
    std::vector<double> scratch;
    return cholesky_factor(neg, scratch);
}

bool is_positive_definite(const SymMatrix& m, double margin) {
    const int n = m.dim();
    SymMatrix shifted(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) shifted.set(i, j, m(i, j) - (i == j ? margin : 0.0));
    std::vector<double> scratch;
    return cholesky_factor(shifted, scratch);
}

std::vector<double> eigenvalue_oracle(const SymMatrix& m) {
    const int n = m.dim();
    std::vector<double> a(m.data(), m.data() + std::size_t(n) * n);
    auto at = [&](int i, int j) -> double& { return a[std::size_t(i) * n + j]; };

    const double norm = m.frobenius_norm();
    const double tol = 1e-10 * norm;

    auto offdiag_norm = [&] {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += 2.0 * at(i, j) * at(i, j);
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < 100 && offdiag_norm() > tol; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double app = at(p, p);
                const double aqq = at(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                // Stable tangent of the rotation angle, smaller root.
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }

    std::vector<double> eig(n);
    for (int i = 0; i < n; ++i) eig[i] = at(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

}  // namespace ramp
