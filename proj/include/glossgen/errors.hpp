// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// \file
// Error hierarchy shared by all modules. The CLI maps these onto exit codes:
// UsageError -> 1, DataError -> 2, BackendError -> 3.

#ifndef GLOSSGEN_ERRORS_HPP_
#define GLOSSGEN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace glossgen {

// Bad command line or bad request shape (caller mistake).
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid or inconsistent input data, failed validation, missing files.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// A pluggable backend (subprocess generator or translator) misbehaved.
class BackendError : public std::runtime_error {
 public:
  explicit BackendError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace glossgen

#endif  // GLOSSGEN_ERRORS_HPP_
