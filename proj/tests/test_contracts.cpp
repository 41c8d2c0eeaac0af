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

#include <gtest/gtest.h>

#include <memory>
#include <random>

#include "oracles.hpp"
#include "qcontract/algorithms.hpp"
#include "qcontract/contracts.hpp"
#include "qcontract/errors.hpp"

using namespace qcontract;
using oracle::cd;

namespace {

const auto kAlwaysTrue = [](const StateVector &, const StateVector &) { return true; };

ContractCircuit plus_prep() {
    ContractCircuit prep(1, "prep");
    prep.append(gates::h(), {0});
    return prep;
}

ContractCircuit hadamard_parent(const GateSpec &ugate, const OperatorExpr &u) {
    ContractCircuit parent(2);
    parent.append(plus_prep(), {1});
    parent.append(hadamard_test_circuit(ugate, u), {0, 1});
    return parent;
}

ViolationKind build_kind(const std::function<void()> &f) {
    try {
        f();
    } catch (const ContractViolation &v) {
        return v.kind();
    }
    return ViolationKind::StateCondition;
}

}  // namespace

TEST(Builder, sizes_and_append) {
    ContractCircuit c = new_circuit(2);
    EXPECT_EQ(c.size(), 2);
    EXPECT_TRUE(c.instructions().empty());
    EXPECT_EQ(build_kind([] { ContractCircuit(0); }), ViolationKind::Build);
    EXPECT_EQ(build_kind([] { ContractCircuit(31); }), ViolationKind::Build);
    EXPECT_EQ(ContractCircuit(gates::t().arity() + 1).size(), 2);

    append_gate(c, gates::h(), {0});
    EXPECT_EQ(c.instructions().size(), 1u);
    EXPECT_EQ(build_kind([&] { c.append(gates::cx(), {0, 0}); }), ViolationKind::Build);
    EXPECT_EQ(build_kind([&] { c.append(gates::h(), {5}); }), ViolationKind::Build);
    EXPECT_EQ(build_kind([&] { c.append(gates::cx(), {0}); }), ViolationKind::Build);
    EXPECT_EQ(c.instructions().size(), 1u);
}

TEST(Builder, sub_circuits) {
    ContractCircuit parent(2);
    const ContractCircuit ht = hadamard_test_circuit(gates::t(), OperatorExpr::gate(gates::t()));
    append_sub(parent, ht, {0, 1});
    ASSERT_EQ(parent.instructions().size(), 1u);
    const auto &sub = std::get<SubInstruction>(parent.instructions()[0]);
    EXPECT_EQ(sub.circuit->name(), "hadamard_test");
    EXPECT_TRUE(sub.circuit->has_condition("condition1"));

    EXPECT_EQ(build_kind([&] { parent.append(ht, {0}); }), ViolationKind::Build);
    EXPECT_EQ(build_kind([&] { parent.append(ht, {1, 1}); }), ViolationKind::Build);
    EXPECT_EQ(build_kind([&] { parent.append(ht, {0, 2}); }), ViolationKind::Build);

    // Appending copies: later edits to the original do not leak in.
    ContractCircuit editable(1, "e");
    parent.append(editable, {0});
    editable.append(gates::x(), {0});
    EXPECT_TRUE(std::get<SubInstruction>(parent.instructions()[1]).circuit->instructions().empty());
}

TEST(Builder, conditions) {
    ContractCircuit c(1);
    add_condition(c, "condition1", kAlwaysTrue);
    EXPECT_TRUE(c.has_condition("condition1"));
    EXPECT_FALSE(c.has_condition("condition2"));
    EXPECT_EQ(build_kind([&] { c.add_condition("condition1", kAlwaysTrue); }), ViolationKind::Build);
    EXPECT_EQ(build_kind([&] { c.add_condition("empty", StatePredicate{}); }), ViolationKind::Build);
    c.append(gates::h(), {0});
    EXPECT_NO_THROW(run_state(c));
}

TEST(Run, empty_and_initial_state) {
    std::mt19937_64 rng(1);
    const StateVector init(oracle::random_state(2, rng));
    const StateVector out = run_state(ContractCircuit(2), init);
    EXPECT_EQ(out.amplitudes(), init.amplitudes());
    EXPECT_EQ(run_state(ContractCircuit(1)).amplitudes(), StateVector::zero(1).amplitudes());
    EXPECT_THROW(run_state(ContractCircuit(2), StateVector::zero(1)), DimensionError);
}

TEST(Run, top_level_condition_sees_full_states) {
    ContractCircuit c(2);
    c.append(gates::x(), {1});
    StateVector seen_pre = StateVector::zero(1);
    StateVector seen_post = StateVector::zero(1);
    c.add_condition("spy", [&](const StateVector &pre, const StateVector &post) {
        seen_pre = pre;
        seen_post = post;
        return true;
    });
    run_state(c);
    EXPECT_EQ(seen_pre.amplitudes(), StateVector::basis(2, 0).amplitudes());
    EXPECT_EQ(seen_post.amplitudes(), StateVector::basis(2, 2).amplitudes());
}

TEST(Run, hadamard_parent_passes_and_fault_is_tagged) {
    const OperatorExpr t = OperatorExpr::gate(gates::t());
    const StateVector out = run_state(hadamard_parent(gates::t(), t));
    EXPECT_NEAR(std::norm(out[0]) + std::norm(out[2]), 0.926777, 1e-6);

    try {
        run_state(hadamard_parent(gates::s(), t));
        FAIL() << "expected a violation";
    } catch (const ContractViolation &v) {
        EXPECT_EQ(v.kind(), ViolationKind::StateCondition);
        EXPECT_EQ(v.tag(), "condition1");
        EXPECT_EQ(v.path(), "main/1");
        EXPECT_NE(std::string(v.what()).find("StateConditionError: Condition Error occurred in 'condition1'"),
                  std::string::npos);
    }

    RunOptions off;
    off.check_conditions = false;
    EXPECT_NO_THROW(run_state(hadamard_parent(gates::s(), t), std::nullopt, off));
}

TEST(Run, sub_condition_sees_partial_states) {
    // The sub runs on parent qubits (2, 0); its qubit j is parent qubit map[j].
    ContractCircuit sub(2, "sub");
    sub.append(gates::x(), {0});
    StateVector seen_pre = StateVector::zero(1);
    StateVector seen_post = StateVector::zero(1);
    sub.add_condition("spy", [&](const StateVector &pre, const StateVector &post) {
        seen_pre = pre;
        seen_post = post;
        return true;
    });
    ContractCircuit parent(3);
    parent.append(gates::x(), {0});
    parent.append(gates::h(), {1});
    parent.append(sub, {2, 0});
    run_state(parent);
    // pre: parent q2 = 0, q0 = 1 -> sub |q1 q0> = |10> (index 2). post: sub q0 flipped -> index 3.
    EXPECT_TRUE(eq_state(seen_pre, StateVector::basis(2, 2)));
    EXPECT_TRUE(eq_state(seen_post, StateVector::basis(2, 3)));
}

TEST(Run, entangled_sub_is_reported) {
    ContractCircuit sub(1, "sub");
    sub.append(gates::z(), {0});
    sub.add_condition("mine", kAlwaysTrue);
    ContractCircuit parent(2);
    parent.append(gates::h(), {0});
    parent.append(gates::cx(), {0, 1});
    parent.append(sub, {1});
    try {
        run_state(parent);
        FAIL() << "expected a violation";
    } catch (const ContractViolation &v) {
        EXPECT_EQ(v.kind(), ViolationKind::EntangledSubset);
        EXPECT_EQ(v.tag(), "mine");
        EXPECT_EQ(v.path(), "main/2");
    }
    // Without conditions there is nothing to check, so no partial state is needed.
    ContractCircuit plain(1, "plain");
    plain.append(gates::z(), {0});
    ContractCircuit parent2(2);
    parent2.append(gates::h(), {0});
    parent2.append(gates::cx(), {0, 1});
    parent2.append(plain, {1});
    EXPECT_NO_THROW(run_state(parent2));
}

TEST(Run, predicate_entanglement_errors_become_violations) {
    ContractCircuit c(2);
    c.append(gates::h(), {0});
    c.append(gates::cx(), {0, 1});
    c.add_condition("needs_factor", [](const StateVector &, const StateVector &post) {
        const std::vector<int> keep = {0};
        partial_state(post, keep);
        return true;
    });
    try {
        run_state(c);
        FAIL();
    } catch (const ContractViolation &v) {
        EXPECT_EQ(v.kind(), ViolationKind::EntangledSubset);
        EXPECT_EQ(v.tag(), "needs_factor");
    }
}

TEST(Run, every_condition_checked_every_invocation) {
    auto calls = std::make_shared<int>(0);
    ContractCircuit leaf(1, "leaf");
    leaf.append(gates::x(), {0});
    leaf.add_condition("count", [calls](const StateVector &, const StateVector &) {
        ++*calls;
        return true;
    });
    ContractCircuit mid(2, "mid");
    mid.append(leaf, {0});
    mid.append(leaf, {1});
    mid.add_condition("count_mid", [calls](const StateVector &, const StateVector &) {
        *calls += 100;
        return true;
    });
    ContractCircuit top(3);
    top.append(mid, {0, 1});
    top.append(mid, {1, 2});
    run_state(top);
    EXPECT_EQ(*calls, 4 + 200);
    run_state(top);
    EXPECT_EQ(*calls, 2 * 204);
}

TEST(Run, violation_path_has_every_level) {
    ContractCircuit leaf(1, "leaf");
    leaf.append(gates::x(), {0});
    leaf.add_condition("never", [](const StateVector &, const StateVector &) { return false; });
    ContractCircuit mid(1, "mid");
    mid.append(gates::h(), {0});
    mid.append(gates::h(), {0});
    mid.append(leaf, {0});
    ContractCircuit top(2, "root");
    top.append(gates::h(), {1});
    top.append(mid, {0});
    try {
        run_state(top);
        FAIL();
    } catch (const ContractViolation &v) {
        EXPECT_EQ(v.path(), "root/1/2");
        EXPECT_EQ(std::string(v.what()), "StateConditionError: Condition Error occurred in 'never' (path: root/1/2)");
    }
}

TEST(Flatten, agrees_with_nested_run) {
    const ContractCircuit parent = hadamard_parent(gates::t(), OperatorExpr::gate(gates::t()));
    const ContractCircuit flat = flatten(parent);
    for (const auto &instr : flat.instructions()) {
        EXPECT_TRUE(std::holds_alternative<GateInstruction>(instr));
    }
    EXPECT_TRUE(flat.conditions().empty());
    const StateVector a = run_state(parent);
    const StateVector b = run_state(flat);
    EXPECT_LT((a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);

    const Matrix u = circuit_unitary(parent);
    EXPECT_TRUE(is_unitary(u, 1e-12));
    EXPECT_LT((u.col(0) - a.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Run, global_phase_applied) {
    ContractCircuit c(1);
    c.add_global_phase(0.5);
    const StateVector s = run_state(c);
    EXPECT_LT(std::abs(s[0] - std::exp(cd(0, 0.5))), 1e-15);
}

TEST(Measure, construction) {
    ContractCircuit c(2);
    c.append(gates::h(), {0});
    EXPECT_EQ(build_kind([&] { measure(c, {}, raw_counts); }), ViolationKind::Build);
    EXPECT_EQ(build_kind([&] { measure(c, {2}, raw_counts); }), ViolationKind::Build);
    EXPECT_EQ(build_kind([&] { measure(c, {0, 0}, raw_counts); }), ViolationKind::Build);

    auto mc = measure(c, {0, 1}, raw_counts);
    const auto out = run_measured(mc, 1000, 3);
    EXPECT_EQ(out.value, out.counts);
    EXPECT_EQ(out.counts.total_shots, 1000u);
    EXPECT_EQ(out.counts["10"] + out.counts["00"], 1000u);
    EXPECT_THROW(mc.run(0, 1), InvalidArgument);

    add_measure_condition(mc, "always", [](const StateVector &, const Counts &, const Counts &) { return true; });
    EXPECT_EQ(build_kind([&] {
                  mc.add_condition("always", [](const StateVector &, const Counts &, const Counts &) { return true; });
              }),
              ViolationKind::Build);
    EXPECT_EQ(mc.run(1000, 3).counts, out.counts);
}

TEST(Measure, conditions_and_postprocess_errors) {
    ContractCircuit c(1);
    c.append(gates::h(), {0});
    auto mc = measure(c, {0}, estimate_real_expectation);
    mc.add_condition("too_strict", [](const StateVector &, const Counts &, const double &v) { return v > 0.5; });
    try {
        mc.run(1000, 1);
        FAIL();
    } catch (const ContractViolation &v) {
        EXPECT_EQ(v.kind(), ViolationKind::MeasureCondition);
        EXPECT_EQ(v.tag(), "too_strict");
        EXPECT_NE(std::string(v.what()).find("MeasureConditionError"), std::string::npos);
    }

    auto broken = measure(c, {0}, [](const Counts &) -> int { throw std::runtime_error("boom"); });
    EXPECT_THROW(broken.run(10, 1), PostprocessError);
}

TEST(Measure, hadamard_pipeline_values) {
    const auto mc = hadamard_test_pipeline(gates::t(), OperatorExpr::gate(gates::t()), plus_prep());
    const auto out = mc.run(100000, 1);
    EXPECT_NEAR(out.value, 0.853553, 0.01);
    // Same seed, same histogram.
    EXPECT_EQ(mc.run(100000, 1).counts, out.counts);

    const auto zc = hadamard_test_pipeline(gates::z(), OperatorExpr::gate(gates::z()), plus_prep());
    EXPECT_NEAR(zc.run(100000, 1).value, 0.0, 0.01);
    EXPECT_THROW(mc.run(0, 1), InvalidArgument);
}
