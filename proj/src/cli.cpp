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

#include "qcontract/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "qcontract/algorithms.hpp"
#include "qcontract/decompose.hpp"
#include "qcontract/dsl.hpp"

namespace qcontract {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitError = 2;

// Largest register for which `decompose` builds full unitaries for the residual.
constexpr int kMaxResidualQubits = 10;

struct Flags {
    std::optional<std::uint64_t> shots;
    std::uint64_t seed = 1;
    double tolerance = 1e-8;
    std::string path;
    std::string example;
    std::string basis = "h,rx,rz,cx";
    bool inject_fault = false;
    int qft_n = 3;
    int qpe_m = 3;
};

constexpr std::uint64_t kDefaultShots = 100000;

void listing_into(const ContractCircuit &c, int depth, std::ostream &os) {
    const std::string indent(static_cast<std::size_t>(2 * depth), ' ');
    os << indent << "circuit " << c.name() << " " << c.size() << "\n";
    for (const auto &instr : c.instructions()) {
        if (const auto *g = std::get_if<GateInstruction>(&instr)) {
            os << indent << "  " << g->gate.label();
            for (int q : g->qubits) {
                os << " " << q;
            }
            os << "\n";
        } else {
            const auto &sub = std::get<SubInstruction>(instr);
            os << indent << "  sub";
            for (int q : sub.qubits) {
                os << " " << q;
            }
            os << "\n";
            listing_into(*sub.circuit, depth + 2, os);
        }
    }
    for (const auto &cond : c.conditions()) {
        os << indent << "  assert " << cond.tag << "\n";
    }
    if (c.global_phase() != 0.0) {
        std::ostringstream ph;
        ph.precision(12);
        ph << c.global_phase();
        os << indent << "  global_phase " << ph.str() << "\n";
    }
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidArgument("cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

dsl::Program load_program(const Flags &f) {
    const std::string src = read_file(f.path);
    dsl::ElaborateOptions opts;
    opts.eq_tolerance = f.tolerance;
    return dsl::elaborate(dsl::parse_file(src), opts);
}

void print_state_summary(const StateVector &s, std::ostream &out) {
    out << "final state (" << s.num_qubits() << " qubits, qubit 0 rightmost):\n";
    const int shown_max = 16;
    int shown = 0;
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(s.size()); ++k) {
        const Complex a = s[static_cast<std::size_t>(k)];
        if (std::abs(a) < 1e-9) {
            continue;
        }
        if (shown == shown_max) {
            out << "  ...\n";
            break;
        }
        char buf[96];
        std::snprintf(buf, sizeof buf, "%+.6f%+.6fi", a.real(), a.imag());
        out << "  |" << outcome_key(static_cast<std::uint64_t>(k), s.num_qubits()) << "> " << buf << "\n";
        ++shown;
    }
}

int cmd_run(const Flags &f, std::ostream &out) {
    dsl::Program prog = load_program(f);
    if (prog.measured) {
        const std::uint64_t shots = f.shots.value_or(prog.shots.value_or(kDefaultShots));
        auto outcome = prog.measured->run(shots, f.seed);
        out << dsl::format_value(outcome.value) << "\n";
    } else {
        print_state_summary(run_state(prog.circuit), out);
    }
    out << "all contracts passed\n";
    return kExitOk;
}

int example_hadamard(const Flags &f, std::ostream &out) {
    ContractCircuit prep(1, "prep");
    prep.append(gates::h(), {0});
    const GateSpec ugate = f.inject_fault ? gates::s() : gates::t();
    auto mc = hadamard_test_pipeline(ugate, OperatorExpr::gate(gates::t()), prep);
    auto outcome = mc.run(f.shots.value_or(kDefaultShots), f.seed);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", outcome.value);
    out << "estimate " << buf << " (exact " << (1.0 + std::cos(std::numbers::pi / 4)) / 2.0 << ")\n";
    out << "all contracts passed\n";
    return kExitOk;
}

int example_qft(const Flags &f, std::ostream &out) {
    const StateVector input = seeded_random_state(f.qft_n, f.seed);
    run_state(qft_circuit(f.qft_n, f.tolerance), input);
    out << "qft n=" << f.qft_n << " on seeded random input (seed " << f.seed << ")\n";
    out << "all contracts passed\n";
    return kExitOk;
}

int example_qpe(const Flags &f, std::ostream &out) {
    ContractCircuit prep(1, "eigenstate");
    prep.append(gates::x(), {0});
    auto mc = qpe_circuit(gates::t(), prep, f.qpe_m, 0.125);
    auto outcome = mc.run(f.shots.value_or(kDefaultShots), f.seed);
    out << dsl::format_value(outcome.value) << "\n";
    out << "all contracts passed\n";
    return kExitOk;
}

int cmd_example(const Flags &f, std::ostream &out) {
    if (f.example == "hadamard-test") {
        return example_hadamard(f, out);
    }
    if (f.example == "qft") {
        return example_qft(f, out);
    }
    return example_qpe(f, out);
}

int cmd_decompose(const Flags &f, std::ostream &out) {
    const std::set<std::string> basis = parse_basis(f.basis);
    dsl::Program prog = load_program(f);
    const ContractCircuit dec = decompose_circuit(prog.circuit, basis);
    out << circuit_listing(dec);
    if (dec.size() <= kMaxResidualQubits) {
        const double residual = max_abs_diff(circuit_unitary(dec), circuit_unitary(prog.circuit));
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e", residual);
        out << "residual " << buf << "\n";
    } else {
        out << "residual skipped (more than " << kMaxResidualQubits << " qubits)\n";
    }
    return kExitOk;
}

}  // namespace

std::string circuit_listing(const ContractCircuit &c) {
    std::ostringstream os;
    listing_into(c, 0, os);
    return os.str();
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Run quantum circuits with contracts", "qcontract"};
    app.require_subcommand(1);
    Flags f;

    auto add_run_flags = [&f](CLI::App *sub) {
        sub->add_option("--shots", f.shots, "Measurement shots (default: file value or 100000)")
            ->check(CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max()));
        sub->add_option("--seed", f.seed, "Sampling seed")->capture_default_str();
        sub->add_option("--tolerance", f.tolerance, "eq_state tolerance for state assertions")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
    };

    CLI::App *run = app.add_subcommand("run", "Parse, elaborate and run a .qc file");
    run->add_option("path", f.path, "Circuit file")->required();
    add_run_flags(run);

    CLI::App *example = app.add_subcommand("example", "Run a built-in example");
    example->add_option("name", f.example, "Example name")
        ->required()
        ->check(CLI::IsMember({"hadamard-test", "qft", "qpe"}));
    add_run_flags(example);
    example->add_flag("--inject-fault", f.inject_fault, "hadamard-test: implement controlled-S while claiming T");
    example->add_option("--n", f.qft_n, "qft: register size")->capture_default_str()->check(CLI::Range(1, 12));
    example->add_option("--m", f.qpe_m, "qpe: counting qubits")->capture_default_str()->check(CLI::Range(1, 10));

    CLI::App *decompose = app.add_subcommand("decompose", "Rewrite a .qc file into a basis gate set");
    decompose->add_option("path", f.path, "Circuit file")->required();
    decompose->add_option("--basis", f.basis, "Comma-separated basis gate names")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (run->parsed()) {
            return cmd_run(f, out);
        }
        if (example->parsed()) {
            return cmd_example(f, out);
        }
        return cmd_decompose(f, out);
    } catch (const ContractViolation &v) {
        err << v.what() << "\n";
        return v.kind() == ViolationKind::Build ? kExitError : kExitViolation;
    } catch (const dsl::DslError &e) {
        err << f.path << ":" << e.what() << "\n";
        return kExitError;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    std::vector<const char *> argv{"qcontract"};
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace qcontract
