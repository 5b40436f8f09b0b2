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
// Line-oriented child process used by the external generation and
// translation backends: one request line on the child's stdin, one response
// line from its stdout. An empty response line is a valid empty sentence;
// child exit before responding is a BackendError.

#ifndef GLOSSGEN_SUBPROCESS_HPP_
#define GLOSSGEN_SUBPROCESS_HPP_

#include <cstdio>
#include <mutex>
#include <string>

#include "glossgen/text.hpp"

namespace glossgen {

class LineProcess {
 public:
  // Spawns `command` via /bin/sh -c. Throws BackendError on spawn failure.
  explicit LineProcess(const std::string& command);
  ~LineProcess();

  LineProcess(const LineProcess&) = delete;
  LineProcess& operator=(const LineProcess&) = delete;

  // Sends one line (tokens space-joined) and reads one response line back.
  // Calls are serialized internally, so a LineProcess may back concurrent
  // workers as long as the child is a pure per-line function.
  Sentence round_trip(const Sentence& request);

 private:
  std::string command_;
  std::mutex mutex_;
  int pid_ = -1;
  std::FILE* to_child_ = nullptr;
  std::FILE* from_child_ = nullptr;
};

}  // namespace glossgen

#endif  // GLOSSGEN_SUBPROCESS_HPP_
