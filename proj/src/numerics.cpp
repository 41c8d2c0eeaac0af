// Copyright 2026 The qcontract Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qcontract/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "qcontract/errors.hpp"

namespace qcontract {

Complex make_complex(double re, double im) {
    if (!std::isfinite(re) || !std::isfinite(im)) {
        throw InvalidArgument("complex scalar components must be finite");
    }
    return {re, im};
}

int qubits_for_dimension(std::size_t dim) {
    if (dim < 2 || (dim & (dim - 1)) != 0) {
        std::ostringstream ss;
        ss << "dimension " << dim << " is not a power of two >= 2";
        throw DimensionError(ss.str());
    }
    int n = 0;
    while ((std::size_t{1} << n) < dim) {
        ++n;
    }
    return n;
}

double max_abs_diff(const Matrix &a, const Matrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("max_abs_diff: shape mismatch");
    }
    if (a.size() == 0) {
        return 0.0;
    }
    return (a - b).cwiseAbs().maxCoeff();
}

bool is_unitary(const Matrix &m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    Matrix id = Matrix::Identity(m.rows(), m.cols());
    return max_abs_diff(m.adjoint() * m, id) <= tol;
}

void validate_qubit_list(std::span<const int> qubits, int num_qubits) {
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        if (qubits[i] < 0 || qubits[i] >= num_qubits) {
            std::ostringstream ss;
            ss << "qubit index " << qubits[i] << " out of range for " << num_qubits << " qubit(s)";
            throw IndexError(ss.str());
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (qubits[j] == qubits[i]) {
                std::ostringstream ss;
                ss << "duplicate qubit index " << qubits[i];
                throw IndexError(ss.str());
            }
        }
    }
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(Vector amps) : num_qubits_(qubits_for_dimension(static_cast<std::size_t>(amps.size()))), amps_(std::move(amps)) {
    for (Eigen::Index k = 0; k < amps_.size(); ++k) {
        if (!std::isfinite(amps_[k].real()) || !std::isfinite(amps_[k].imag())) {
            throw InvalidArgument("state amplitudes must be finite");
        }
    }
}

StateVector::StateVector(std::initializer_list<Complex> amps)
    : StateVector(Vector(Eigen::Map<const Vector>(amps.begin(), static_cast<Eigen::Index>(amps.size())))) {}

StateVector StateVector::zero(int num_qubits) { return basis(num_qubits, 0); }

StateVector StateVector::basis(int num_qubits, std::uint64_t index) {
    if (num_qubits < 1 || num_qubits > 30) {
        throw InvalidArgument("qubit count must be in [1, 30]");
    }
    std::size_t dim = std::size_t{1} << num_qubits;
    if (index >= dim) {
        throw IndexError("basis index out of range");
    }
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return StateVector(std::move(v));
}

bool StateVector::is_normalized(double tol) const { return std::abs(amps_.squaredNorm() - 1.0) <= tol; }

StateVector StateVector::operator+(const StateVector &other) const {
    if (other.num_qubits_ != num_qubits_) {
        throw DimensionError("state sum: qubit counts differ");
    }
    return StateVector(amps_ + other.amps_);
}

StateVector StateVector::operator-(const StateVector &other) const {
    if (other.num_qubits_ != num_qubits_) {
        throw DimensionError("state difference: qubit counts differ");
    }
    return StateVector(amps_ - other.amps_);
}

StateVector StateVector::operator*(Complex scale) const { return StateVector(amps_ * scale); }

StateVector StateVector::operator/(Complex scale) const {
    if (scale == Complex{0.0, 0.0}) {
        throw InvalidArgument("division of a state by zero");
    }
    return StateVector(amps_ / scale);
}

// ---------------------------------------------------------------------------
// UnitaryMatrix / DensityMatrix

UnitaryMatrix UnitaryMatrix::checked(Matrix m, double tol) {
    if (m.rows() != m.cols()) {
        throw DimensionError("unitary must be square");
    }
    int n = qubits_for_dimension(static_cast<std::size_t>(m.rows()));
    if (!m.allFinite()) {
        throw InvalidArgument("matrix entries must be finite");
    }
    if (!is_unitary(m, tol)) {
        throw InvalidArgument("matrix is not unitary");
    }
    return UnitaryMatrix(std::move(m), n);
}

UnitaryMatrix UnitaryMatrix::identity(int num_qubits) {
    auto dim = static_cast<Eigen::Index>(std::size_t{1} << num_qubits);
    return UnitaryMatrix(Matrix::Identity(dim, dim), num_qubits);
}

UnitaryMatrix UnitaryMatrix::adjoint() const { return UnitaryMatrix(m_.adjoint(), num_qubits_); }

UnitaryMatrix UnitaryMatrix::operator*(const UnitaryMatrix &other) const {
    if (other.dim() != dim()) {
        throw DimensionError("unitary product: dimensions differ");
    }
    return UnitaryMatrix(m_ * other.m_, num_qubits_);
}

DensityMatrix DensityMatrix::checked(Matrix m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("density matrix must be square");
    }
    int n = qubits_for_dimension(static_cast<std::size_t>(m.rows()));
    if (max_abs_diff(m, m.adjoint()) > kHermitianTolerance) {
        throw InvalidArgument("density matrix is not Hermitian");
    }
    if (std::abs(m.trace() - Complex{1.0, 0.0}) > kHermitianTolerance) {
        throw InvalidArgument("density matrix trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kHermitianTolerance) {
        throw InvalidArgument("density matrix is not positive semidefinite");
    }
    return DensityMatrix(std::move(m), n);
}

// ---------------------------------------------------------------------------
// Operations

StateVector tensor_states(const StateVector &a, const StateVector &b) {
    const Vector &va = a.amplitudes();
    const Vector &vb = b.amplitudes();
    Vector out(va.size() * vb.size());
    for (Eigen::Index i = 0; i < va.size(); ++i) {
        out.segment(i * vb.size(), vb.size()) = va[i] * vb;
    }
    return StateVector(std::move(out));
}

Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
        }
    }
    return out;
}

UnitaryMatrix kron(const UnitaryMatrix &a, const UnitaryMatrix &b) {
    return UnitaryMatrix::checked(kron(a.matrix(), b.matrix()));
}

Complex inner(const StateVector &a, const StateVector &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw DimensionError("inner product: qubit counts differ");
    }
    return a.amplitudes().dot(b.amplitudes());  // Eigen's dot conjugates the left operand.
}

DensityMatrix reduced_density(const StateVector &s, std::span<const int> keep) {
    const int n = s.num_qubits();
    if (keep.empty()) {
        throw IndexError("reduced_density: keep list is empty");
    }
    validate_qubit_list(keep, n);

    std::vector<int> env;
    for (int q = 0; q < n; ++q) {
        bool kept = false;
        for (int k : keep) {
            kept = kept || (k == q);
        }
        if (!kept) {
            env.push_back(q);
        }
    }

    const auto k = static_cast<int>(keep.size());
    const std::size_t sub_dim = std::size_t{1} << k;
    const std::size_t env_dim = std::size_t{1} << env.size();

    // Full-register offset of every sub-register index.
    std::vector<std::size_t> sub_offset(sub_dim, 0);
    for (std::size_t a = 0; a < sub_dim; ++a) {
        for (int j = 0; j < k; ++j) {
            if ((a >> j) & 1U) {
                sub_offset[a] |= std::size_t{1} << keep[static_cast<std::size_t>(j)];
            }
        }
    }

    Matrix rho = Matrix::Zero(static_cast<Eigen::Index>(sub_dim), static_cast<Eigen::Index>(sub_dim));
    Vector slice(static_cast<Eigen::Index>(sub_dim));
    for (std::size_t e = 0; e < env_dim; ++e) {
        std::size_t env_offset = 0;
        for (std::size_t j = 0; j < env.size(); ++j) {
            if ((e >> j) & 1U) {
                env_offset |= std::size_t{1} << env[j];
            }
        }
        for (std::size_t a = 0; a < sub_dim; ++a) {
            slice[static_cast<Eigen::Index>(a)] = s[env_offset | sub_offset[a]];
        }
        rho.noalias() += slice * slice.adjoint();
    }
    return DensityMatrix(std::move(rho), k);
}

double purity(const DensityMatrix &rho) {
    // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    return rho.matrix().cwiseAbs2().sum();
}

}  // namespace qcontract
