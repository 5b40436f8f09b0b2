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

#include "glossgen/subprocess.hpp"

#include <csignal>
#include <cstring>

#include <sys/wait.h>
#include <unistd.h>

#include "glossgen/errors.hpp"

namespace glossgen {

LineProcess::LineProcess(const std::string& command) : command_(command) {
  // A dead child must surface as a read/write failure, not a SIGPIPE kill.
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });

  int to_child[2];
  int from_child[2];
  if (pipe(to_child) != 0 || pipe(from_child) != 0) {
    throw BackendError("pipe() failed for backend: " + command);
  }
  const int pid = fork();
  if (pid < 0) throw BackendError("fork() failed for backend: " + command);
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  pid_ = pid;
  close(to_child[0]);
  close(from_child[1]);
  to_child_ = fdopen(to_child[1], "w");
  from_child_ = fdopen(from_child[0], "r");
  if (!to_child_ || !from_child_) {
    throw BackendError("fdopen() failed for backend: " + command);
  }
}

LineProcess::~LineProcess() {
  if (to_child_) std::fclose(to_child_);
  if (from_child_) std::fclose(from_child_);
  if (pid_ > 0) {
    int status = 0;
    waitpid(pid_, &status, 0);
  }
}

Sentence LineProcess::round_trip(const Sentence& request) {
  std::lock_guard<std::mutex> lock(mutex_);
  const std::string line = join(request) + "\n";
  if (std::fwrite(line.data(), 1, line.size(), to_child_) != line.size() ||
      std::fflush(to_child_) != 0) {
    throw BackendError("backend '" + command_ + "' closed its input");
  }
  std::string response;
  int c;
  while ((c = std::fgetc(from_child_)) != EOF) {
    if (c == '\n') return split_ws(response);
    response.push_back(static_cast<char>(c));
  }
  throw BackendError("backend '" + command_ + "' exited before responding");
}

}  // namespace glossgen
