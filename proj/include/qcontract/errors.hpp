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

#pragma once

#include <stdexcept>
#include <string>

namespace qcontract {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not line up (qubit counts, matrix dimensions).
class DimensionError : public Error {
   public:
    using Error::Error;
};

/// A qubit index list is out of range, has duplicates or the wrong length.
class IndexError : public Error {
   public:
    using Error::Error;
};

/// A value violates a documented precondition (non-unitary matrix, shots = 0, ...).
class InvalidArgument : public Error {
   public:
    using Error::Error;
};

/// The requested qubit subset is entangled with the rest of the register, so
/// it has no pure partial state.
class EntangledSubsetError : public Error {
   public:
    EntangledSubsetError(double purity, const std::string &message) : Error(message), purity_(purity) {}
    double purity() const { return purity_; }

   private:
    double purity_;
};

/// A user-supplied postprocess function failed.
class PostprocessError : public Error {
   public:
    using Error::Error;
};

}  // namespace qcontract
