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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qcontract/algorithms.hpp"
#include "qcontract/cli.hpp"
#include "qcontract/decompose.hpp"
#include "qcontract/dsl.hpp"

namespace py = pybind11;
using namespace qcontract;

namespace {

// States cross the boundary as 1-D complex numpy arrays.
StateVector to_state(const Vector &v) { return StateVector(v); }

py::dict counts_to_dict(const Counts &c) {
    py::dict d;
    for (const auto &[k, n] : c.table) {
        d[py::str(k)] = n;
    }
    return d;
}

Counts counts_from_dict(const std::map<std::string, std::uint64_t> &table) {
    Counts c;
    for (const auto &[k, n] : table) {
        if (c.num_bits == 0) {
            c.num_bits = static_cast<int>(k.size());
        } else if (c.num_bits != static_cast<int>(k.size())) {
            throw InvalidArgument("count keys have different lengths");
        }
        c.table[k] = n;
        c.total_shots += n;
    }
    return c;
}

py::list sequence_ops(const DecomposedSequence &seq) {
    py::list ops;
    for (const auto &op : seq.gates) {
        ops.append(py::make_tuple(op.gate.name(), op.gate.params(), op.qubits));
    }
    return ops;
}

py::object dsl_value(const dsl::ExprValue &v) {
    if (const auto *z = std::get_if<Complex>(&v)) {
        return py::cast(*z);
    }
    if (const auto *s = std::get_if<StateExpr>(&v)) {
        return py::cast(Vector(s->eval().amplitudes()));
    }
    if (const auto *o = std::get_if<OperatorExpr>(&v)) {
        return py::cast(Matrix(o->eval()));
    }
    // A bra comes back as its row of conjugated amplitudes.
    return py::cast(Vector(std::get<dsl::Bra>(v).ket.eval().amplitudes().conjugate()));
}

template <class E>
py::object make_error(const py::exception<E> &type, const char *what) {
    return py::reinterpret_borrow<py::object>(type.ptr())(what);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "qcontract: quantum circuits with runtime state and measurement contracts";

    static py::exception<ContractViolation> violation_exc(m, "ContractViolation", PyExc_RuntimeError);
    static py::exception<dsl::DslError> dsl_exc(m, "DslError", PyExc_ValueError);
    static py::exception<EntangledSubsetError> entangled_exc(m, "EntangledSubsetError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const ContractViolation &e) {
            py::object err = make_error(violation_exc, e.what());
            err.attr("kind") = violation_kind_name(e.kind());
            err.attr("tag") = e.tag();
            err.attr("path") = e.path();
            PyErr_SetObject(violation_exc.ptr(), err.ptr());
        } catch (const dsl::DslError &e) {
            py::object err = make_error(dsl_exc, e.what());
            err.attr("line") = e.span().line;
            err.attr("col_start") = e.span().col_start;
            err.attr("col_end") = e.span().col_end;
            err.attr("message") = e.message();
            PyErr_SetObject(dsl_exc.ptr(), err.ptr());
        } catch (const EntangledSubsetError &e) {
            py::object err = make_error(entangled_exc, e.what());
            err.attr("purity") = e.purity();
            PyErr_SetObject(entangled_exc.ptr(), err.ptr());
        } catch (const IndexError &e) {
            PyErr_SetString(PyExc_IndexError, e.what());
        } catch (const Error &e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    // -- gates ---------------------------------------------------------------
    py::class_<GateSpec>(m, "Gate")
        .def_property_readonly("name", &GateSpec::name)
        .def_property_readonly("params", &GateSpec::params)
        .def_property_readonly("arity", &GateSpec::arity)
        .def_property_readonly("matrix", [](const GateSpec &g) { return Matrix(g.unitary().matrix()); })
        .def("controlled", [](const GateSpec &g) { return controlled(g); })
        .def("adjoint", [](const GateSpec &g) { return adjoint(g); })
        .def("__repr__", [](const GateSpec &g) { return "<Gate " + g.label() + ">"; });

    m.def(
        "gate", [](const std::string &name, const std::vector<double> &params) { return gates::by_name(name, params); },
        py::arg("name"), py::arg("params") = std::vector<double>{});
    m.def(
        "matrix_gate", [](const Matrix &u) { return gates::matrix(u); }, py::arg("u"));
    m.def("gate_names", &gates::catalog_names);

    // -- simulator -----------------------------------------------------------
    m.def(
        "apply_gate",
        [](const Vector &state, const GateSpec &g, const std::vector<int> &qubits) {
            return Vector(apply_gate(to_state(state), g, qubits).amplitudes());
        },
        py::arg("state"), py::arg("gate"), py::arg("qubits"));
    m.def(
        "marginal_probabilities",
        [](const Vector &state, const std::vector<int> &qubits) {
            return marginal_probabilities(to_state(state), qubits).probs;
        },
        py::arg("state"), py::arg("qubits"));
    m.def(
        "sample_counts",
        [](const std::vector<double> &probs, std::uint64_t shots, std::uint64_t seed) {
            ProbabilityTable t{qubits_for_dimension(probs.size()), probs};
            return counts_to_dict(sample_counts(t, shots, seed));
        },
        py::arg("probs"), py::arg("shots"), py::arg("seed"));
    m.def(
        "zero_state", [](int n) { return Vector(StateVector::zero(n).amplitudes()); }, py::arg("num_qubits"));
    m.def(
        "seeded_random_state", [](int n, std::uint64_t seed) { return Vector(seeded_random_state(n, seed).amplitudes()); },
        py::arg("num_qubits"), py::arg("seed"));

    // -- expressions ---------------------------------------------------------
    m.def(
        "partial_state",
        [](const Vector &state, const std::vector<int> &keep, double purity_tol) {
            return Vector(partial_state(to_state(state), keep, purity_tol).amplitudes());
        },
        py::arg("state"), py::arg("keep"), py::arg("purity_tol") = 1e-8);
    m.def(
        "eq_state", [](const Vector &a, const Vector &b, double tol) { return eq_state(to_state(a), to_state(b), tol); },
        py::arg("a"), py::arg("b"), py::arg("tol") = 1e-8);
    m.def(
        "fidelity", [](const Vector &a, const Vector &b) { return fidelity(to_state(a), to_state(b)); }, py::arg("a"),
        py::arg("b"));
    m.def(
        "purity",
        [](const Vector &state, const std::vector<int> &keep) { return purity(reduced_density(to_state(state), keep)); },
        py::arg("state"), py::arg("keep"));

    // -- contracts -----------------------------------------------------------
    py::class_<ContractCircuit>(m, "Circuit")
        .def(py::init<int, std::string>(), py::arg("size"), py::arg("name") = "main")
        .def_property_readonly("size", &ContractCircuit::size)
        .def_property_readonly("name", &ContractCircuit::name)
        .def_property_readonly("global_phase", &ContractCircuit::global_phase)
        .def_property_readonly("num_instructions",
                               [](const ContractCircuit &c) { return c.instructions().size(); })
        .def_property_readonly("condition_tags",
                               [](const ContractCircuit &c) {
                                   std::vector<std::string> tags;
                                   for (const auto &cond : c.conditions()) {
                                       tags.push_back(cond.tag);
                                   }
                                   return tags;
                               })
        .def(
            "append",
            [](ContractCircuit &c, const GateSpec &g, std::vector<int> qubits) -> ContractCircuit & {
                return c.append(g, std::move(qubits));
            },
            py::arg("gate"), py::arg("qubits"), py::return_value_policy::reference_internal)
        .def(
            "append_sub",
            [](ContractCircuit &c, const ContractCircuit &sub, std::vector<int> qubits) -> ContractCircuit & {
                return c.append(sub, std::move(qubits));
            },
            py::arg("sub"), py::arg("qubits"), py::return_value_policy::reference_internal)
        .def(
            "add_condition",
            [](ContractCircuit &c, std::string tag, std::function<bool(const Vector &, const Vector &)> pred)
                -> ContractCircuit & {
                return c.add_condition(std::move(tag), [pred](const StateVector &pre, const StateVector &post) {
                    return pred(pre.amplitudes(), post.amplitudes());
                });
            },
            py::arg("tag"), py::arg("predicate"), py::return_value_policy::reference_internal)
        .def(
            "run",
            [](const ContractCircuit &c, std::optional<Vector> initial, bool check) {
                std::optional<StateVector> start;
                if (initial) {
                    start = StateVector(*initial);
                }
                RunOptions opts;
                opts.check_conditions = check;
                return Vector(run_state(c, start, opts).amplitudes());
            },
            py::arg("initial") = std::nullopt, py::arg("check_conditions") = true)
        .def("unitary", [](const ContractCircuit &c) { return circuit_unitary(c); })
        .def("flatten", [](const ContractCircuit &c) { return flatten(c); })
        .def(
            "decompose", [](const ContractCircuit &c, const std::string &basis) { return decompose_circuit(c, parse_basis(basis)); },
            py::arg("basis") = "h,rx,rz,cx")
        .def("listing", [](const ContractCircuit &c) { return circuit_listing(c); });

    // -- decompose -----------------------------------------------------------
    m.def(
        "zyz_angles",
        [](const Matrix &u) {
            const ZyzAngles a = zyz_angles(u);
            return py::make_tuple(a.alpha, a.beta, a.gamma, a.delta);
        },
        py::arg("u"));
    m.def(
        "decompose_1q",
        [](const Matrix &u) {
            const DecomposedSequence s = decompose_1q(u);
            return py::make_tuple(sequence_ops(s), s.global_phase);
        },
        py::arg("u"));
    m.def(
        "decompose_controlled",
        [](const Matrix &u) {
            const DecomposedSequence s = decompose_controlled(u);
            return py::make_tuple(sequence_ops(s), s.global_phase);
        },
        py::arg("u"));

    // -- algorithms ----------------------------------------------------------
    m.def(
        "controlled_u_circuit", [](const GateSpec &g, double tol) { return controlled_u_circuit(g, tol); },
        py::arg("gate"), py::arg("tol") = 1e-8);
    m.def(
        "hadamard_test_circuit",
        [](const GateSpec &g, const Matrix &claimed, double tol) {
            return hadamard_test_circuit(g, OperatorExpr::matrix(claimed), tol);
        },
        py::arg("gate"), py::arg("claimed"), py::arg("tol") = 1e-8);
    m.def(
        "hadamard_test",
        [](const GateSpec &g, const Matrix &claimed, const GateSpec &prep, std::uint64_t shots, std::uint64_t seed,
           double abs_tol) {
            ContractCircuit p(1, "prep");
            p.append(prep, {0});
            const auto out = hadamard_test_pipeline(g, OperatorExpr::matrix(claimed), p, abs_tol).run(shots, seed);
            return py::make_tuple(out.value, counts_to_dict(out.counts));
        },
        py::arg("gate"), py::arg("claimed"), py::arg("prep"), py::arg("shots") = 100000, py::arg("seed") = 1,
        py::arg("abs_tol") = 0.01);
    m.def(
        "estimate_real_expectation",
        [](const std::map<std::string, std::uint64_t> &c) { return estimate_real_expectation(counts_from_dict(c)); },
        py::arg("counts"));
    m.def("dft_matrix", &dft_matrix, py::arg("n"));
    m.def(
        "qft_circuit", [](int n, double tol) { return qft_circuit(n, tol); }, py::arg("n"), py::arg("tol") = 1e-8);
    m.def(
        "inverse_qft_circuit", [](int n, double tol) { return inverse_qft_circuit(n, tol); }, py::arg("n"),
        py::arg("tol") = 1e-8);
    m.def(
        "phase_estimation",
        [](const GateSpec &g, const GateSpec &prep, int m_bits, std::optional<double> expected, std::uint64_t shots,
           std::uint64_t seed) {
            ContractCircuit p(1, "prep");
            p.append(prep, {0});
            const auto out = qpe_circuit(g, p, m_bits, expected).run(shots, seed);
            return py::make_tuple(out.value.phase, out.value.mode_bitstring, counts_to_dict(out.counts));
        },
        py::arg("gate"), py::arg("prep"), py::arg("m"), py::arg("expected_phase") = std::nullopt,
        py::arg("shots") = 1000, py::arg("seed") = 1);
    m.def(
        "decode_phase",
        [](const std::map<std::string, std::uint64_t> &c) {
            const PhaseEstimate e = decode_phase(counts_from_dict(c));
            return py::make_tuple(e.phase, e.mode_bitstring);
        },
        py::arg("counts"));

    // -- dsl -----------------------------------------------------------------
    m.def(
        "evaluate_expression",
        [](const std::string &src, std::optional<Vector> pre) {
            std::optional<StateVector> bound;
            if (pre) {
                bound = StateVector(*pre);
            }
            return dsl_value(dsl::evaluate(*dsl::parse_expression(src), bound));
        },
        py::arg("source"), py::arg("pre") = std::nullopt);
    m.def(
        "format_source", [](const std::string &src) { return dsl::to_source(dsl::parse_file(src)); },
        py::arg("source"));
    m.def(
        "load_circuit",
        [](const std::string &src, double tol) {
            dsl::ElaborateOptions opts;
            opts.eq_tolerance = tol;
            return dsl::elaborate(dsl::parse_file(src), opts).circuit;
        },
        py::arg("source"), py::arg("tolerance") = 1e-8);
    m.def(
        "run_source",
        [](const std::string &src, std::optional<std::uint64_t> shots, std::uint64_t seed, double tol) -> py::object {
            dsl::ElaborateOptions opts;
            opts.eq_tolerance = tol;
            dsl::Program prog = dsl::elaborate(dsl::parse_file(src), opts);
            if (!prog.measured) {
                return py::cast(Vector(run_state(prog.circuit).amplitudes()));
            }
            const auto out = prog.measured->run(shots.value_or(prog.shots.value_or(100000)), seed);
            return py::make_tuple(dsl::format_value(out.value), counts_to_dict(out.counts));
        },
        py::arg("source"), py::arg("shots") = std::nullopt, py::arg("seed") = 1, py::arg("tolerance") = 1e-8);

    // -- cli -----------------------------------------------------------------
    m.def(
        "run_cli",
        [](const std::vector<std::string> &args) {
            std::ostringstream out;
            std::ostringstream err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
