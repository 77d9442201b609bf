// Joint pure states over Alice x Bob x ancilla, reduced states, and the
// standard distinguishability measures between Bob's views.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qbc/errors.hpp"
#include "qbc/linalg.hpp"

namespace qbc {

// Tensor factor layout. Flat index convention is Alice-major:
//   flat(a, b, l) = a * (dim_b * dim_anc) + b * dim_anc + l.
struct SystemLayout {
    std::size_t dim_a;
    std::size_t dim_b;
    std::size_t dim_anc;

    SystemLayout(std::size_t a, std::size_t b, std::size_t anc = 1)
        : dim_a(a), dim_b(b), dim_anc(anc) {
        if (dim_a == 0 || dim_b == 0 || dim_anc == 0) {
            throw ShapeError("layout dimensions must be positive");
        }
        if (dim_a > kMaxDim || dim_b > kMaxDim || dim_anc > kMaxDim ||
            dim_a * dim_b * dim_anc > kMaxDim) {
            throw ShapeError("layout dimension exceeds cap of " + std::to_string(kMaxDim));
        }
    }

    std::size_t bob_dim() const { return dim_b * dim_anc; }
    std::size_t total() const { return dim_a * dim_b * dim_anc; }

    std::size_t flat(std::size_t a, std::size_t b, std::size_t l) const {
        return a * bob_dim() + b * dim_anc + l;
    }

    bool operator==(const SystemLayout& rhs) const {
        return dim_a == rhs.dim_a && dim_b == rhs.dim_b && dim_anc == rhs.dim_anc;
    }
    bool operator!=(const SystemLayout& rhs) const { return !(*this == rhs); }
};

class StateVector {
public:
    StateVector(SystemLayout layout, std::vector<Complex> amplitudes)
        : layout_(layout), amps_(std::move(amplitudes)) {
        if (amps_.size() != layout_.total()) {
            throw ShapeError("amplitude count does not match layout");
        }
        double n = 0.0;
        for (Complex z : amps_) {
            if (!detail::is_finite(z)) {
                throw NumericError("state amplitudes must be finite");
            }
            n += std::norm(z);
        }
        if (std::abs(std::sqrt(n) - 1.0) > 1e-9) {
            throw NumericError("state vector is not normalized");
        }
    }

    // Rescales the amplitudes to unit norm before constructing.
    static StateVector normalized(SystemLayout layout, std::vector<Complex> amplitudes) {
        double n = 0.0;
        for (Complex z : amplitudes) {
            if (!detail::is_finite(z)) {
                throw NumericError("state amplitudes must be finite");
            }
            n += std::norm(z);
        }
        n = std::sqrt(n);
        if (n <= 0.0) {
            throw NumericError("cannot normalize the zero vector");
        }
        for (Complex& z : amplitudes) {
            z /= n;
        }
        return StateVector(layout, std::move(amplitudes));
    }

    const SystemLayout& layout() const { return layout_; }
    const std::vector<Complex>& amplitudes() const { return amps_; }
    Complex operator[](std::size_t i) const { return amps_[i]; }

    double norm() const {
        double n = 0.0;
        for (Complex z : amps_) {
            n += std::norm(z);
        }
        return std::sqrt(n);
    }

private:
    SystemLayout layout_;
    std::vector<Complex> amps_;
};

// Computational basis state |a, b, l>.
inline StateVector basis_state(const SystemLayout& layout, std::size_t a, std::size_t b,
                               std::size_t l = 0) {
    if (a >= layout.dim_a || b >= layout.dim_b || l >= layout.dim_anc) {
        throw ShapeError("basis index out of range");
    }
    std::vector<Complex> amps(layout.total(), Complex(0.0, 0.0));
    amps[layout.flat(a, b, l)] = 1.0;
    return StateVector(layout, std::move(amps));
}

inline Complex inner_product(const StateVector& a, const StateVector& b) {
    if (a.layout() != b.layout()) {
        throw ShapeError("inner product requires matching layouts");
    }
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.amplitudes().size(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {
        if (mat_.rows() != mat_.cols()) {
            throw ShapeError("density matrix must be square");
        }
        if (!mat_.is_hermitian(1e-9)) {
            throw NumericError("density matrix must be Hermitian");
        }
        if (std::abs(mat_.trace() - Complex(1.0, 0.0)) > 1e-9) {
            throw NumericError("density matrix must have unit trace");
        }
        HermEigResult eig = herm_eig(mat_);
        if (eig.eigenvalues.front() < -1e-9) {
            throw NumericError("density matrix must be positive semidefinite");
        }
    }

    std::size_t dim() const { return mat_.rows(); }
    const ComplexMatrix& matrix() const { return mat_; }

private:
    ComplexMatrix mat_;
};

// Reshapes the amplitudes into the dim_a x (dim_b * dim_anc) matrix M with
// M(a, j) the amplitude of |a> tensor |j>. Pure reindexing, no arithmetic.
inline ComplexMatrix amplitude_matrix(const StateVector& psi) {
    const SystemLayout& layout = psi.layout();
    ComplexMatrix m(layout.dim_a, layout.bob_dim());
    for (std::size_t a = 0; a < layout.dim_a; ++a) {
        for (std::size_t j = 0; j < layout.bob_dim(); ++j) {
            m(a, j) = psi[a * layout.bob_dim() + j];
        }
    }
    return m;
}

// Bob's reduced state: trace out Alice. Equals M^dagger M for the amplitude
// matrix M, computed here by direct summation.
inline DensityMatrix partial_trace_alice(const StateVector& psi) {
    const SystemLayout& layout = psi.layout();
    const std::size_t d = layout.bob_dim();
    ComplexMatrix rho(d, d);
    for (std::size_t a = 0; a < layout.dim_a; ++a) {
        const std::size_t base = a * d;
        for (std::size_t j = 0; j < d; ++j) {
            Complex amp = psi[base + j];
            if (amp == Complex(0.0, 0.0)) {
                continue;
            }
            for (std::size_t k = 0; k < d; ++k) {
                rho(j, k) += amp * std::conj(psi[base + k]);
            }
        }
    }
    return DensityMatrix(std::move(rho));
}

// Uhlmann fidelity F(rho, sigma) = || sqrt(rho) sqrt(sigma) ||_1, clamped to [0, 1].
inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw ShapeError("fidelity requires equal dimensions");
    }
    double f = trace_norm(psd_sqrt(rho.matrix()) * psd_sqrt(sigma.matrix()));
    return std::clamp(f, 0.0, 1.0);
}

// Trace distance D(rho, sigma) = 0.5 || rho - sigma ||_1, clamped to [0, 1].
inline double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw ShapeError("trace distance requires equal dimensions");
    }
    double d = 0.5 * trace_norm(rho.matrix() - sigma.matrix());
    return std::clamp(d, 0.0, 1.0);
}

// Applies a unitary on Alice's factor only: psi' = (u tensor 1) psi.
inline StateVector apply_alice_unitary(const StateVector& psi, const ComplexMatrix& u) {
    const SystemLayout& layout = psi.layout();
    if (u.rows() != layout.dim_a || u.cols() != layout.dim_a) {
        throw ShapeError("unitary dimension does not match Alice's factor");
    }
    if (!u.is_unitary(1e-9)) {
        throw NumericError("apply_alice_unitary requires a unitary matrix");
    }
    const std::size_t d = layout.bob_dim();
    std::vector<Complex> out(layout.total(), Complex(0.0, 0.0));
    for (std::size_t ap = 0; ap < layout.dim_a; ++ap) {
        for (std::size_t a = 0; a < layout.dim_a; ++a) {
            Complex w = u(ap, a);
            if (w == Complex(0.0, 0.0)) {
                continue;
            }
            const std::size_t src = a * d;
            const std::size_t dst = ap * d;
            for (std::size_t j = 0; j < d; ++j) {
                out[dst + j] += w * psi[src + j];
            }
        }
    }
    // A unitary preserves the norm, so the constructor's check passes.
    return StateVector(layout, std::move(out));
}

// Schmidt decomposition across the Alice | Bob+ancilla cut:
//   psi = sum_i coefficients[i] * alice_basis.col(i) tensor bob_basis.col(i).
struct SchmidtDecomposition {
    std::vector<double> coefficients; // non-negative, descending
    ComplexMatrix alice_basis;        // dim_a x k, orthonormal columns
    ComplexMatrix bob_basis;          // bob_dim x k, orthonormal columns
};

inline SchmidtDecomposition schmidt(const StateVector& psi) {
    SvdResult s = svd(amplitude_matrix(psi));
    SchmidtDecomposition out;
    out.coefficients = std::move(s.singular_values);
    out.alice_basis = std::move(s.left);
    // Row i of right_adjoint holds the amplitudes of the i-th Bob vector, so a
    // plain transpose (no conjugation) yields column vectors.
    out.bob_basis = s.right_adjoint.transpose();
    return out;
}

} // namespace qbc
