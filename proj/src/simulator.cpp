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

#include "qcontract/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcontract/errors.hpp"
#include "qcontract/rng.hpp"

namespace qcontract {

std::uint64_t Counts::operator[](std::string_view key) const {
    auto it = table.find(std::string(key));
    return it == table.end() ? 0 : it->second;
}

std::string outcome_key(std::uint64_t r, int num_bits) {
    std::string key(static_cast<std::size_t>(num_bits), '0');
    for (int j = 0; j < num_bits; ++j) {
        if ((r >> (num_bits - 1 - j)) & 1U) {
            key[static_cast<std::size_t>(j)] = '1';
        }
    }
    return key;
}

void apply_matrix_in_place(StateVector &s, const Matrix &u, std::span<const int> qubits) {
    const int n = s.num_qubits();
    const auto k = static_cast<int>(qubits.size());
    validate_qubit_list(qubits, n);
    const std::size_t local_dim = std::size_t{1} << k;
    if (static_cast<std::size_t>(u.rows()) != local_dim || u.rows() != u.cols()) {
        throw DimensionError("gate matrix does not match the number of qubit arguments");
    }

    Vector &amps = s.mutable_amplitudes();
    const std::size_t dim = amps.size();

    if (k == 1) {
        const std::size_t bit = std::size_t{1} << qubits[0];
        const Complex u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
        for (std::size_t i = 0; i < dim; ++i) {
            if (i & bit) {
                continue;
            }
            const Complex a0 = amps[static_cast<Eigen::Index>(i)];
            const Complex a1 = amps[static_cast<Eigen::Index>(i | bit)];
            amps[static_cast<Eigen::Index>(i)] = u00 * a0 + u01 * a1;
            amps[static_cast<Eigen::Index>(i | bit)] = u10 * a0 + u11 * a1;
        }
        return;
    }

    // Local index l: bit (k-1-j) of l belongs to qubits[j].
    std::vector<std::size_t> offset(local_dim, 0);
    std::size_t mask = 0;
    for (int j = 0; j < k; ++j) {
        mask |= std::size_t{1} << qubits[static_cast<std::size_t>(j)];
    }
    for (std::size_t l = 0; l < local_dim; ++l) {
        for (int j = 0; j < k; ++j) {
            if ((l >> (k - 1 - j)) & 1U) {
                offset[l] |= std::size_t{1} << qubits[static_cast<std::size_t>(j)];
            }
        }
    }
    Vector in(static_cast<Eigen::Index>(local_dim));
    Vector out(static_cast<Eigen::Index>(local_dim));
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & mask) {
            continue;
        }
        for (std::size_t l = 0; l < local_dim; ++l) {
            in[static_cast<Eigen::Index>(l)] = amps[static_cast<Eigen::Index>(i | offset[l])];
        }
        out.noalias() = u * in;
        for (std::size_t l = 0; l < local_dim; ++l) {
            amps[static_cast<Eigen::Index>(i | offset[l])] = out[static_cast<Eigen::Index>(l)];
        }
    }
}

StateVector apply_gate(const StateVector &s, const GateSpec &g, std::span<const int> qubits) {
    if (static_cast<int>(qubits.size()) != g.arity()) {
        std::ostringstream ss;
        ss << "gate '" << g.name() << "' acts on " << g.arity() << " qubit(s), got " << qubits.size();
        throw IndexError(ss.str());
    }
    StateVector out = s;
    apply_matrix_in_place(out, g.unitary().matrix(), qubits);
    return out;
}

Matrix embed_matrix(const Matrix &u, std::span<const int> qubits, int num_qubits) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << num_qubits);
    Matrix full(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
        StateVector col = StateVector::basis(num_qubits, static_cast<std::uint64_t>(c));
        apply_matrix_in_place(col, u, qubits);
        full.col(c) = col.amplitudes();
    }
    return full;
}

ProbabilityTable marginal_probabilities(const StateVector &s, std::span<const int> qubits) {
    const auto m = static_cast<int>(qubits.size());
    if (m == 0) {
        throw IndexError("marginal_probabilities: no qubits listed");
    }
    validate_qubit_list(qubits, s.num_qubits());
    ProbabilityTable table;
    table.num_bits = m;
    table.probs.assign(std::size_t{1} << m, 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::size_t r = 0;
        for (int j = 0; j < m; ++j) {
            if ((i >> qubits[static_cast<std::size_t>(j)]) & 1U) {
                r |= std::size_t{1} << (m - 1 - j);
            }
        }
        table.probs[r] += std::norm(s[i]);
    }
    return table;
}

Counts sample_counts(const ProbabilityTable &probs, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw InvalidArgument("shots must be >= 1");
    }
    if (probs.num_bits < 1 || probs.probs.size() != (std::size_t{1} << probs.num_bits)) {
        throw InvalidArgument("probability table size does not match its bit count");
    }
    double total = 0.0;
    for (double p : probs.probs) {
        if (!std::isfinite(p) || p < -1e-12) {
            throw InvalidArgument("probability table has a negative or non-finite entry");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-8) {
        throw InvalidArgument("probabilities do not sum to 1");
    }

    std::vector<double> cdf(probs.probs.size());
    double acc = 0.0;
    std::size_t last_nonzero = 0;
    for (std::size_t r = 0; r < cdf.size(); ++r) {
        acc += std::max(probs.probs[r], 0.0);
        cdf[r] = acc;
        if (probs.probs[r] > 0.0) {
            last_nonzero = r;
        }
    }

    std::vector<std::uint64_t> tally(cdf.size(), 0);
    Xoshiro256StarStar rng(seed);
    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        const double u = rng.next_unit() * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t r = it == cdf.end() ? last_nonzero : static_cast<std::size_t>(it - cdf.begin());
        ++tally[r];
    }

    Counts counts;
    counts.num_bits = probs.num_bits;
    counts.total_shots = shots;
    for (std::size_t r = 0; r < tally.size(); ++r) {
        if (tally[r] > 0) {
            counts.table.emplace(outcome_key(r, probs.num_bits), tally[r]);
        }
    }
    return counts;
}

}  // namespace qcontract
