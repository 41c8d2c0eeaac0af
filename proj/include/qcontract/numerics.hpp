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

/**
 * @file numerics.hpp
 * Dense complex linear algebra used by the simulator and the assertion
 * expressions.
 *
 * Bit convention (global): amplitude index k encodes qubit i as bit i of k,
 * so qubit 0 is the least significant bit. In a tensor product a (x) b the
 * right factor b occupies the lower qubit indices, which is exactly the
 * ordering of the ordinary Kronecker product.
 */

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qcontract {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kUnitaryTolerance = 1e-9;
inline constexpr double kHermitianTolerance = 1e-10;

/// Builds a complex scalar, rejecting NaN and infinite components.
Complex make_complex(double re, double im = 0.0);

/// Returns log2(dim) when dim is a power of two >= 2, otherwise throws DimensionError.
int qubits_for_dimension(std::size_t dim);

/// Largest entrywise modulus of a - b. Shapes must match.
double max_abs_diff(const Matrix &a, const Matrix &b);

bool is_unitary(const Matrix &m, double tol = kUnitaryTolerance);

/// Amplitudes of an n-qubit register. May be subnormalized (expression
/// intermediates are); use is_normalized() where a physical state is required.
class StateVector {
   public:
    explicit StateVector(Vector amps);
    StateVector(std::initializer_list<Complex> amps);

    static StateVector zero(int num_qubits);
    static StateVector basis(int num_qubits, std::uint64_t index);

    int num_qubits() const { return num_qubits_; }
    std::size_t size() const { return static_cast<std::size_t>(amps_.size()); }
    const Vector &amplitudes() const { return amps_; }
    Vector &mutable_amplitudes() { return amps_; }
    Complex operator[](std::size_t k) const { return amps_[static_cast<Eigen::Index>(k)]; }

    double norm() const { return amps_.norm(); }
    bool is_normalized(double tol = kNormTolerance) const;

    StateVector operator+(const StateVector &other) const;
    StateVector operator-(const StateVector &other) const;
    StateVector operator*(Complex scale) const;
    StateVector operator/(Complex scale) const;

   private:
    int num_qubits_;
    Vector amps_;
};

/// A square matrix of power-of-two dimension that passed the unitarity check.
class UnitaryMatrix {
   public:
    /// Throws InvalidArgument when m is not unitary within tol.
    static UnitaryMatrix checked(Matrix m, double tol = kUnitaryTolerance);
    static UnitaryMatrix identity(int num_qubits);

    const Matrix &matrix() const { return m_; }
    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    int num_qubits() const { return num_qubits_; }
    Complex operator()(std::size_t r, std::size_t c) const {
        return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
    UnitaryMatrix adjoint() const;
    UnitaryMatrix operator*(const UnitaryMatrix &other) const;

   private:
    UnitaryMatrix(Matrix m, int num_qubits) : m_(std::move(m)), num_qubits_(num_qubits) {}
    Matrix m_;
    int num_qubits_;
};

/// Reduced state of a qubit subset. Built by reduced_density(); row/column bit j
/// corresponds to the j-th kept qubit.
class DensityMatrix {
   public:
    /// Throws InvalidArgument unless Hermitian, unit trace and positive semidefinite.
    static DensityMatrix checked(Matrix m);

    const Matrix &matrix() const { return m_; }
    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    int num_qubits() const { return num_qubits_; }

   private:
    friend DensityMatrix reduced_density(const StateVector &, std::span<const int>);
    DensityMatrix(Matrix m, int num_qubits) : m_(std::move(m)), num_qubits_(num_qubits) {}
    Matrix m_;
    int num_qubits_;
};

/// a (x) b; b takes the lower qubit indices.
StateVector tensor_states(const StateVector &a, const StateVector &b);

/// A (x) B with the same convention as tensor_states.
UnitaryMatrix kron(const UnitaryMatrix &a, const UnitaryMatrix &b);
Matrix kron(const Matrix &a, const Matrix &b);

/// <a|b> = sum_k conj(a_k) b_k.
Complex inner(const StateVector &a, const StateVector &b);

/// Partial trace over every qubit not listed in keep.
DensityMatrix reduced_density(const StateVector &s, std::span<const int> keep);

/// tr(rho^2).
double purity(const DensityMatrix &rho);

/// Throws IndexError unless every index is < num_qubits and no index repeats.
void validate_qubit_list(std::span<const int> qubits, int num_qubits);

}  // namespace qcontract
