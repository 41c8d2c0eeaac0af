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
 * @file cli.hpp
 * The `qcontract` command line:
 *
 *     qcontract run <file.qc> [--shots N] [--seed S] [--tolerance T]
 *     qcontract example {hadamard-test,qft,qpe} [--shots N] [--seed S] ...
 *     qcontract decompose <file.qc> [--basis h,rx,rz,cx]
 *
 * Exit codes: 0 all contracts held, 1 contract violation, 2 usage, parse or
 * build error. Results go to `out`, diagnostics to `err`.
 */

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "qcontract/contracts.hpp"

namespace qcontract {

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

/// Convenience overload; args excludes the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Indented instruction listing of a circuit, one gate per line.
std::string circuit_listing(const ContractCircuit &c);

}  // namespace qcontract
