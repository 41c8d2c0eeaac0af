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

// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <regex>
#include <sstream>

#include "oracles.hpp"
#include "qcontract/algorithms.hpp"
#include "qcontract/cli.hpp"
#include "qcontract/decompose.hpp"
#include "qcontract/dsl.hpp"

using namespace qcontract;
using oracle::cd;
using oracle::kPi;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool ok = true;
    std::string why;

    void require(bool cond, const std::string &what) {
        if (!cond && ok) {
            ok = false;
            why = what;
        }
    }
};

ContractCircuit single(const GateSpec &g, const char *name) {
    ContractCircuit c(1, name);
    c.append(g, {0});
    return c;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

// --- 1 ---------------------------------------------------------------------
Check hadamard_end_to_end() {
    Check c;
    const double exact = (1 + std::cos(kPi / 4)) / 2;
    try {
        auto mc = hadamard_test_pipeline(gates::t(), OperatorExpr::gate(gates::t()), single(gates::h(), "prep"));
        const auto out = mc.run(100000, 1);
        c.require(std::abs(out.value - 0.853553) <= 0.01, "estimate " + std::to_string(out.value));
        c.require(std::abs(exact - 0.853553) < 1e-6, "analytic value");
    } catch (const std::exception &e) {
        c.require(false, e.what());
    }
    return c;
}

// --- 2 ---------------------------------------------------------------------
Check fault_injection() {
    Check c;
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
        try {
            auto mc = hadamard_test_pipeline(gates::s(), OperatorExpr::gate(gates::t()), single(gates::h(), "prep"));
            mc.run(100000, 1);
            c.require(false, "no violation raised");
        } catch (const ContractViolation &v) {
            c.require(v.kind() == ViolationKind::StateCondition, "wrong kind");
            c.require(v.tag() == "condition1", "tag " + v.tag());
            c.require(std::string(v.what()).find("StateConditionError") != std::string::npos, v.what());
            c.require(rep == 0 || first == v.what(), "message differs between runs");
            first = v.what();
        }
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli({"example", "hadamard-test", "--inject-fault"}, out, err);
    c.require(code == 1, "exit code " + std::to_string(code));
    c.require(err.str().find("'condition1'") != std::string::npos, err.str());
    return c;
}

// --- 3 ---------------------------------------------------------------------
Check hadamard_expression_property() {
    Check c;
    std::mt19937_64 rng(20260101);
    double worst = 1.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix u = oracle::haar_unitary(2, rng);
        const Vector psi = oracle::random_state(1, rng);
        ContractCircuit parent(2);
        parent.append(hadamard_test_circuit(gates::matrix(u), OperatorExpr::matrix(u)), {0, 1});
        const StateVector start(oracle::kron(psi, Vector(Vector::Unit(2, 0))));
        const StateVector post = run_state(parent, start);

        const OperatorExpr ue = OperatorExpr::matrix(u);
        const StateExpr p = StateExpr::from_vector(StateVector(psi));
        const StateExpr want =
            tensor((p + ue * p) / 2.0, StateExpr::zero()) + tensor((p - ue * p) / 2.0, StateExpr::one());
        worst = std::min(worst, fidelity(post, want.eval()));
    }
    c.require(worst >= 1 - 1e-8, "worst fidelity " + std::to_string(worst));
    return c;
}

// --- 4 ---------------------------------------------------------------------
Matrix multiply_out(const DecomposedSequence &seq) {
    const int n = seq.num_qubits;
    Matrix u = Matrix::Identity(1 << n, 1 << n);
    for (const BasisOp &op : seq.gates) {
        std::vector<int> reg;
        for (int q : op.qubits) {
            reg.push_back(n - 1 - q);
        }
        u = oracle::embed(op.gate.unitary().matrix(), reg, n) * u;
    }
    return std::exp(cd(0, seq.global_phase)) * u;
}

Check decomposition_round_trip() {
    Check c;
    std::mt19937_64 rng(4242);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix u = oracle::haar_unitary(2, rng);
        worst = std::max(worst, max_abs_diff(multiply_out(decompose_1q(u)), u));
        Matrix cu = Matrix::Identity(4, 4);
        cu.bottomRightCorner(2, 2) = u;
        worst = std::max(worst, max_abs_diff(multiply_out(decompose_controlled(u)), cu));
    }
    c.require(worst <= 1e-9, "max entry error " + fmt(worst));
    return c;
}

// --- 5 ---------------------------------------------------------------------
Check qft_oracle() {
    Check c;
    for (int n = 1; n <= 6; ++n) {
        const ContractCircuit q = qft_circuit(n);
        const int dim = 1 << n;
        Matrix got(dim, dim);
        for (int k = 0; k < dim; ++k) {
            got.col(k) = run_state(q, StateVector::basis(n, static_cast<std::uint64_t>(k))).amplitudes();
        }
        const double d = oracle::diff_up_to_phase(got, oracle::dft(n));
        c.require(d <= 1e-10, "n=" + std::to_string(n) + " error " + fmt(d));
    }
    return c;
}

// --- 6 ---------------------------------------------------------------------
Check qpe_exact() {
    Check c;
    const auto out = qpe_circuit(gates::t(), single(gates::x(), "prep"), 3, 0.125).run(1000, 1);
    // Marginal of "001" over counting qubits (2, 1, 0): bits 0 = 1, 1 = 0, 2 = 0.
    double p = 0.0;
    for (std::size_t k = 0; k < out.pre_measure_state.size(); ++k) {
        if ((k & 7U) == 1U) {
            p += std::norm(out.pre_measure_state[k]);
        }
    }
    c.require(std::abs(p - 1.0) <= 1e-10, "P(001) = " + std::to_string(p));
    c.require(out.value.phase == 0.125, "phase " + std::to_string(out.value.phase));
    c.require(out.value.mode_bitstring == "001", "mode " + out.value.mode_bitstring);
    c.require(out.counts["001"] == 1000, "counts");
    return c;
}

// --- 7 ---------------------------------------------------------------------
// Rebuilds a circuit with every condition wrapped in a per-tag call counter.
ContractCircuit counted(const ContractCircuit &src, std::map<std::string, int> &calls) {
    ContractCircuit out(src.size(), src.name());
    for (const auto &instr : src.instructions()) {
        if (const auto *g = std::get_if<GateInstruction>(&instr)) {
            out.append(g->gate, g->qubits);
        } else {
            const auto &s = std::get<SubInstruction>(instr);
            out.append(counted(*s.circuit, calls), s.qubits);
        }
    }
    for (const auto &cond : src.conditions()) {
        auto *slot = &calls[cond.tag];
        auto inner = cond.predicate;
        out.add_condition(cond.tag, [slot, inner](const StateVector &pre, const StateVector &post) {
            ++*slot;
            return inner(pre, post);
        });
    }
    out.add_global_phase(src.global_phase());
    return out;
}

Check nested_semantics() {
    Check c;
    std::mt19937_64 rng(77);
    const Matrix u = oracle::haar_unitary(2, rng);
    const ContractCircuit ht = hadamard_test_circuit(gates::matrix(u), OperatorExpr::matrix(u));

    ContractCircuit parent(4);
    parent.append(single(gates::matrix(oracle::haar_unitary(2, rng)), "prep"), {1});
    parent.append(single(gates::matrix(oracle::haar_unitary(2, rng)), "prep"), {3});
    parent.append(ht, {0, 1});
    parent.append(ht, {2, 3});
    parent.add_condition("parent", [](const StateVector &, const StateVector &post) { return post.is_normalized(); });

    std::map<std::string, int> calls;
    const ContractCircuit probe = counted(parent, calls);
    const int runs = 3;
    StateVector nested = StateVector::zero(4);
    try {
        for (int r = 0; r < runs; ++r) {
            nested = run_state(probe);
        }
    } catch (const std::exception &e) {
        c.require(false, e.what());
        return c;
    }
    c.require(calls["parent"] == runs, "parent checked " + std::to_string(calls["parent"]));
    c.require(calls["condition1"] == 2 * runs, "condition1 checked " + std::to_string(calls["condition1"]));
    c.require(calls["controlled_u"] == 2 * runs, "controlled_u checked " + std::to_string(calls["controlled_u"]));
    c.require(calls["prep"] == 0, "unexpected prep condition");

    const StateVector flat = run_state(flatten(parent));
    const double d = (nested.amplitudes() - flat.amplitudes()).cwiseAbs().maxCoeff();
    c.require(d <= 1e-12, "flat vs nested " + fmt(d));

    // A fault in the innermost block is caught there, with the full path.
    ContractCircuit bad_ht(2, "hadamard_test");
    ContractCircuit bad_cu = controlled_u_circuit(gates::matrix(u));
    ContractCircuit wrong(2, bad_cu.name());
    for (const auto &instr : bad_cu.instructions()) {
        const auto &g = std::get<GateInstruction>(instr);
        wrong.append(g.gate, g.qubits);
    }
    wrong.append(gates::z(), {1});
    for (const auto &cond : bad_cu.conditions()) {
        wrong.add_condition(cond.tag, cond.predicate);
    }
    bad_ht.append(gates::h(), {0});
    bad_ht.append(wrong, {0, 1});
    bad_ht.append(gates::h(), {0});
    ContractCircuit bad_parent(2);
    bad_parent.append(bad_ht, {0, 1});
    try {
        run_state(bad_parent);
        c.require(false, "inner fault not caught");
    } catch (const ContractViolation &v) {
        c.require(v.tag() == "controlled_u" && v.path() == "main/0/1", std::string("got ") + v.what());
    }
    return c;
}

// --- 8 ---------------------------------------------------------------------
Check simulator_invariants() {
    Check c;
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> qubit(0, 7);
    StateVector s(oracle::random_state(8, rng));
    for (int k = 0; k < 1000; ++k) {
        const int a = qubit(rng);
        int b = qubit(rng);
        while (b == a) {
            b = qubit(rng);
        }
        if (k % 3 == 0) {
            s = apply_gate(s, controlled(gates::matrix(oracle::haar_unitary(2, rng))), std::vector<int>{a, b});
        } else {
            s = apply_gate(s, gates::matrix(oracle::haar_unitary(2, rng)), std::vector<int>{a});
        }
    }
    c.require(std::abs(s.norm() - 1.0) <= 1e-10, "norm drift " + fmt(std::abs(s.norm() - 1.0)));

    const std::uint64_t shots = 100000;
    const StateVector probe(oracle::random_state(3, rng));
    const std::vector<int> measured = {2, 0, 1};
    const ProbabilityTable table = marginal_probabilities(probe, measured);
    const Counts counts = sample_counts(table, shots, 12345);
    for (std::size_t r = 0; r < table.probs.size(); ++r) {
        // Independent probability: key bit j is qubit measured[j].
        double p = 0.0;
        for (std::size_t k = 0; k < probe.size(); ++k) {
            bool match = true;
            for (std::size_t j = 0; j < measured.size(); ++j) {
                const std::size_t want = (r >> (measured.size() - 1 - j)) & 1U;
                match = match && ((k >> measured[j]) & 1U) == want;
            }
            p += match ? std::norm(probe[k]) : 0.0;
        }
        const double sigma = std::sqrt(static_cast<double>(shots) * p * (1 - p));
        const double dev = std::abs(static_cast<double>(counts[outcome_key(r, 3)]) - p * static_cast<double>(shots));
        c.require(dev <= 5 * sigma, "outcome " + outcome_key(r, 3) + " off by " + std::to_string(dev / sigma) + " sigma");
    }
    c.require(counts == sample_counts(table, shots, 12345), "repeated Counts differ");

    auto mc = hadamard_test_pipeline(gates::t(), OperatorExpr::gate(gates::t()), single(gates::h(), "prep"));
    c.require(mc.run(shots, 9).counts == mc.run(shots, 9).counts, "pipeline Counts differ");
    return c;
}

// --- 9 ---------------------------------------------------------------------
std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<fs::path> qc_files(const fs::path &dir) {
    std::vector<fs::path> out;
    for (const auto &e : fs::directory_iterator(dir)) {
        if (e.path().extension() == ".qc") {
            out.push_back(e.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string run_outcome(const ContractCircuit &c) {
    try {
        run_state(c);
        return "pass";
    } catch (const ContractViolation &v) {
        return v.tag();
    }
}

Check dsl_corpus() {
    Check c;
    const fs::path root(QCONTRACT_SOURCE_DIR);

    int valid = 0;
    bool hadamard = false;
    std::vector<fs::path> valid_files = qc_files(root / "tests/dsl_corpus/valid");
    for (const auto &p : qc_files(root / "circuits")) {
        if (p.filename().string().find("faulty") == std::string::npos) {
            valid_files.push_back(p);
        }
    }
    for (const auto &p : valid_files) {
        try {
            dsl::Program prog = dsl::elaborate(dsl::parse_file(slurp(p)));
            if (prog.measured) {
                prog.measured->run(prog.shots.value_or(1000), 1);
            } else {
                run_state(prog.circuit);
            }
            ++valid;
            hadamard = hadamard || p.filename() == "hadamard_test.qc";
        } catch (const std::exception &e) {
            c.require(false, p.filename().string() + ": " + e.what());
        }
    }
    c.require(valid >= 3 && hadamard, "valid corpus too small");

    int malformed = 0;
    const std::regex header(R"(^# error: (\d+):(\d+)-(\d+) (.*)$)");
    for (const auto &p : qc_files(root / "tests/dsl_corpus/malformed")) {
        const std::string src = slurp(p);
        std::smatch m;
        const std::string first = src.substr(0, src.find('\n'));
        if (!std::regex_match(first, m, header)) {
            c.require(false, p.filename().string() + ": no error header");
            continue;
        }
        const dsl::SourceSpan want{std::stoi(m[1]), std::stoi(m[2]), std::stoi(m[3])};
        try {
            dsl::elaborate(dsl::parse_file(src));
            c.require(false, p.filename().string() + ": accepted");
        } catch (const dsl::DslError &e) {
            const bool ok = e.span() == want && e.message().find(m[4].str()) != std::string::npos;
            c.require(ok, p.filename().string() + ": got " + e.what());
            malformed += ok ? 1 : 0;
        }
    }
    c.require(malformed >= 20, "only " + std::to_string(malformed) + " malformed files");

    // Matched correct/corrupted pairs: DSL assert vs host predicate.
    int pairs = 0;
    int corrupted = 0;
    for (const char *impl : {"t", "s", "z", "x", "h"}) {
        for (const char *claim : {"T", "S", "Z", "X", "H"}) {
            for (const char *prep : {"h", "x", "ry(0.7)"}) {
                std::ostringstream src;
                src << "circuit ht 2\nh 0\ncontrolled-" << impl << " 0 1\nh 0\n"
                    << "assert condition1: post == (pre[1] + " << claim << " @ pre[1]) / 2 ^ |0> + (pre[1] - "
                    << claim << " @ pre[1]) / 2 ^ |1>\n"
                    << "circuit 2\n" << prep << " 1\nsub ht 0 1\n";
                const dsl::Program prog = dsl::elaborate(dsl::parse_file(src.str()));

                ContractCircuit host(2);
                const GateSpec pg = std::string(prep) == "ry(0.7)" ? gates::ry(0.7) : gates::by_name(prep);
                host.append(single(pg, "prep"), {1});
                host.append(hadamard_test_circuit(gates::by_name(impl), OperatorExpr::gate(gates::by_name(claim))),
                            {0, 1});
                const std::string a = run_outcome(prog.circuit);
                const std::string b = run_outcome(host);
                c.require(a == b, std::string(impl) + "/" + claim + "/" + prep + ": dsl " + a + " host " + b);
                ++pairs;
                corrupted += a == "pass" ? 0 : 1;
            }
        }
    }
    c.require(corrupted > 0 && corrupted < pairs, "pairs do not mix passes and failures");
    return c;
}

}  // namespace

int main() {
    struct Criterion {
        const char *name;
        std::function<Check()> run;
        double budget_s;  // 0 = no limit
    };
    const std::vector<Criterion> criteria = {
        {"1 hadamard test estimate within 0.01 of 0.853553", hadamard_end_to_end, 1.0},
        {"2 controlled-S fault raises condition1, exit 1", fault_injection, 0.0},
        {"3 hadamard post state matches expression (50 pairs)", hadamard_expression_property, 5.0},
        {"4 decomposition round trip (100 plain + 100 controlled)", decomposition_round_trip, 2.0},
        {"5 qft equals dft up to phase, n=1..6", qft_oracle, 5.0},
        {"6 qpe on T gives 001 and phase 0.125", qpe_exact, 1.0},
        {"7 three-level nesting checks every condition", nested_semantics, 0.0},
        {"8 simulator norm, sampling and reproducibility", simulator_invariants, 0.0},
        {"9 dsl corpus, spans and assert/host agreement", dsl_corpus, 0.0},
    };
    int failed = 0;
    for (const auto &cr : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Check result;
        try {
            result = cr.run();
        } catch (const std::exception &e) {
            result.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (cr.budget_s > 0 && secs > cr.budget_s) {
            result.require(false, "took " + std::to_string(secs) + " s");
        }
        std::printf("%s criterion %s (%.3f s)%s%s\n", result.ok ? "PASS" : "FAIL", cr.name, secs,
                    result.ok ? "" : ": ", result.why.c_str());
        failed += result.ok ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
