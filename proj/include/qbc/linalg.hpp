// Dense complex matrices and the decompositions the attack synthesis needs.
// Storage is row-major; Eigen backs the SVD and Hermitian eigensolver.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qbc/errors.hpp"

namespace qbc {

using Complex = std::complex<double>;

// Hard cap on any matrix dimension handled by the library.
inline constexpr std::size_t kMaxDim = 4096;

namespace detail {

inline void check_dim_cap(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
        throw ShapeError("matrix dimensions must be positive");
    }
    if (rows > kMaxDim || cols > kMaxDim) {
        throw ShapeError("matrix dimension exceeds cap of " + std::to_string(kMaxDim));
    }
}

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

} // namespace detail

class ComplexMatrix {
public:
    ComplexMatrix() : rows_(0), cols_(0) {}

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, Complex(0.0, 0.0)) {
        detail::check_dim_cap(rows, cols);
    }

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        detail::check_dim_cap(rows, cols);
        if (entries_.size() != rows_ * cols_) {
            throw ShapeError("entry count does not match matrix shape");
        }
        for (Complex z : entries_) {
            if (!detail::is_finite(z)) {
                throw NumericError("matrix entries must be finite");
            }
        }
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    Complex operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    const std::vector<Complex>& entries() const { return entries_; }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                out(j, i) = std::conj((*this)(i, j));
            }
        }
        return out;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                out(j, i) = (*this)(i, j);
            }
        }
        return out;
    }

    ComplexMatrix conjugate() const {
        ComplexMatrix out(rows_, cols_);
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            out.entries_[i] = std::conj(entries_[i]);
        }
        return out;
    }

    Complex trace() const {
        if (rows_ != cols_) {
            throw ShapeError("trace requires a square matrix");
        }
        Complex t = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            t += (*this)(i, i);
        }
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (Complex z : entries_) {
            s += std::norm(z);
        }
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (Complex z : entries_) {
            m = std::max(m, std::abs(z));
        }
        return m;
    }

    bool is_hermitian(double tol) const {
        if (rows_ != cols_) {
            return false;
        }
        double dev = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                dev += std::norm((*this)(i, j) - std::conj((*this)(j, i)));
            }
        }
        return std::sqrt(dev) <= tol * std::max(1.0, frobenius_norm());
    }

    bool is_unitary(double tol) const {
        if (rows_ != cols_) {
            return false;
        }
        ComplexMatrix g = adjoint() * (*this);
        for (std::size_t i = 0; i < rows_; ++i) {
            g(i, i) -= 1.0;
        }
        return g.frobenius_norm() <= tol * std::sqrt(static_cast<double>(rows_));
    }

    ComplexMatrix operator+(const ComplexMatrix& rhs) const {
        require_same_shape(rhs, "matrix addition");
        ComplexMatrix out(rows_, cols_);
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            out.entries_[i] = entries_[i] + rhs.entries_[i];
        }
        return out;
    }

    ComplexMatrix operator-(const ComplexMatrix& rhs) const {
        require_same_shape(rhs, "matrix subtraction");
        ComplexMatrix out(rows_, cols_);
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            out.entries_[i] = entries_[i] - rhs.entries_[i];
        }
        return out;
    }

    ComplexMatrix operator*(const ComplexMatrix& rhs) const {
        if (cols_ != rhs.rows_) {
            throw ShapeError("inner dimensions do not match in matrix product");
        }
        ComplexMatrix out(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                Complex aik = (*this)(i, k);
                if (aik == Complex(0.0, 0.0)) {
                    continue;
                }
                for (std::size_t j = 0; j < rhs.cols_; ++j) {
                    out(i, j) += aik * rhs(k, j);
                }
            }
        }
        return out;
    }

    ComplexMatrix operator*(Complex scalar) const {
        ComplexMatrix out(rows_, cols_);
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            out.entries_[i] = entries_[i] * scalar;
        }
        return out;
    }

    Eigen::MatrixXcd to_eigen() const {
        Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j);
            }
        }
        return m;
    }

    static ComplexMatrix from_eigen(const Eigen::MatrixXcd& m) {
        ComplexMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
        for (std::size_t i = 0; i < out.rows_; ++i) {
            for (std::size_t j = 0; j < out.cols_; ++j) {
                out(i, j) = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
        }
        return out;
    }

private:
    void require_same_shape(const ComplexMatrix& rhs, const char* what) const {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
            throw ShapeError(std::string(what) + " requires matching shapes");
        }
    }

    std::size_t rows_;
    std::size_t cols_;
    std::vector<Complex> entries_;
};

inline ComplexMatrix operator*(Complex scalar, const ComplexMatrix& m) {
    return m * scalar;
}

// Kronecker product with an explicit cap on the output dimensions.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() * b.rows() > kMaxDim || a.cols() * b.cols() > kMaxDim) {
        throw ShapeError("kron output exceeds dimension cap of " + std::to_string(kMaxDim));
    }
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ia = 0; ia < a.rows(); ++ia) {
        for (std::size_t ja = 0; ja < a.cols(); ++ja) {
            Complex av = a(ia, ja);
            for (std::size_t ib = 0; ib < b.rows(); ++ib) {
                for (std::size_t jb = 0; jb < b.cols(); ++jb) {
                    out(ia * b.rows() + ib, ja * b.cols() + jb) = av * b(ib, jb);
                }
            }
        }
    }
    return out;
}

// Singular value decomposition a = left * diag(singular_values) * right_adjoint.
// `left` is rows x k and `right_adjoint` is k x cols with k = min(rows, cols);
// singular values are non-negative and sorted in descending order.
struct SvdResult {
    ComplexMatrix left;
    std::vector<double> singular_values;
    ComplexMatrix right_adjoint;
};

inline SvdResult svd(const ComplexMatrix& a) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> solver(
        a.to_eigen(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (solver.info() != Eigen::Success) {
        throw NumericError("singular value decomposition failed to converge");
    }
    SvdResult out;
    out.left = ComplexMatrix::from_eigen(solver.matrixU());
    out.right_adjoint = ComplexMatrix::from_eigen(solver.matrixV().adjoint());
    const auto& sv = solver.singularValues();
    out.singular_values.assign(sv.data(), sv.data() + sv.size());
    return out;
}

// Hermitian eigendecomposition; eigenvalues ascending, eigenvectors as columns.
struct HermEigResult {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

inline HermEigResult herm_eig(const ComplexMatrix& h) {
    if (!h.is_hermitian(1e-9)) {
        throw NumericError("herm_eig requires a Hermitian matrix");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.to_eigen());
    if (solver.info() != Eigen::Success) {
        throw NumericError("Hermitian eigendecomposition failed to converge");
    }
    HermEigResult out;
    const auto& ev = solver.eigenvalues();
    out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    out.eigenvectors = ComplexMatrix::from_eigen(solver.eigenvectors());
    return out;
}

// Principal square root of a positive semidefinite Hermitian matrix.
// Eigenvalues in [-1e-12, 0) are clipped to zero; anything lower is an error.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& h) {
    HermEigResult eig = herm_eig(h);
    const std::size_t n = h.rows();
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        double lambda = eig.eigenvalues[k];
        if (lambda < -1e-12) {
            throw NumericError("psd_sqrt requires a positive semidefinite matrix");
        }
        double root = std::sqrt(std::max(lambda, 0.0));
        if (root == 0.0) {
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            Complex vi = eig.eigenvectors(i, k);
            if (vi == Complex(0.0, 0.0)) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += root * vi * std::conj(eig.eigenvectors(j, k));
            }
        }
    }
    return out;
}

// Trace norm: the sum of singular values.
inline double trace_norm(const ComplexMatrix& a) {
    SvdResult s = svd(a);
    double sum = 0.0;
    for (double sigma : s.singular_values) {
        sum += sigma;
    }
    return sum;
}

namespace detail {

// Uniform double in [0, 1) from the top 53 bits of the generator, and a
// standard normal via Box-Muller. Hand-rolled so output is identical across
// standard libraries.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double standard_normal(std::mt19937_64& rng) {
    double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53; // in (0, 1]
    double u2 = uniform_unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

inline Complex complex_normal(std::mt19937_64& rng) {
    double re = standard_normal(rng);
    double im = standard_normal(rng);
    return Complex(re, im);
}

} // namespace detail

// Haar-distributed random unitary: QR of a complex Ginibre matrix with the
// phases of R's diagonal absorbed into Q.
inline ComplexMatrix haar_random_unitary(std::size_t n, std::mt19937_64& rng) {
    detail::check_dim_cap(n, n);
    Eigen::MatrixXcd g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                detail::complex_normal(rng);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (std::size_t j = 0; j < n; ++j) {
        Complex d = r(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j));
        double mag = std::abs(d);
        Complex phase = mag > 0.0 ? d / mag : Complex(1.0, 0.0);
        q.col(static_cast<Eigen::Index>(j)) *= phase;
    }
    return ComplexMatrix::from_eigen(q);
}

// Extends an n x r column-orthonormal matrix to an n x n unitary. Completion
// columns are chosen deterministically: standard basis vectors are tried in
// index order and Gram-Schmidt residuals above a fixed threshold are kept.
inline ComplexMatrix orthonormal_completion(const ComplexMatrix& cols) {
    const std::size_t n = cols.rows();
    const std::size_t r = cols.cols();
    if (r > n) {
        throw ShapeError("cannot complete more columns than the ambient dimension");
    }
    ComplexMatrix out(n, n);
    for (std::size_t j = 0; j < r; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            out(i, j) = cols(i, j);
        }
    }
    std::size_t filled = r;
    for (std::size_t cand = 0; cand < n && filled < n; ++cand) {
        std::vector<Complex> v(n, Complex(0.0, 0.0));
        v[cand] = 1.0;
        // Two rounds of Gram-Schmidt for numerical robustness.
        for (int round = 0; round < 2; ++round) {
            for (std::size_t j = 0; j < filled; ++j) {
                Complex overlap = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    overlap += std::conj(out(i, j)) * v[i];
                }
                for (std::size_t i = 0; i < n; ++i) {
                    v[i] -= overlap * out(i, j);
                }
            }
        }
        double norm = 0.0;
        for (Complex z : v) {
            norm += std::norm(z);
        }
        norm = std::sqrt(norm);
        if (norm < 1e-8) {
            continue; // candidate already spanned
        }
        for (std::size_t i = 0; i < n; ++i) {
            out(i, filled) = v[i] / norm;
        }
        ++filled;
    }
    if (filled != n) {
        throw NumericError("orthonormal completion failed");
    }
    return out;
}

} // namespace qbc
