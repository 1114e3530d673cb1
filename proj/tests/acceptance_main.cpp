// Copyright 2026 The inhomog Authors
//
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

// Acceptance runner: executes every numbered criterion at full scale and
// prints one PASS/FAIL line each.  Exit status 0 iff all pass.
// Usage: acceptance_tests [--quick] [--criterion N] [--threads N]

#include <cstdio>
#include <cstring>
#include <string>

#include "inhomog/acceptance.hpp"
#include "inhomog/parallel.hpp"

int main(int argc, char** argv) {
  inhomog::AcceptanceConfig cfg;
  cfg.threads = inhomog::default_thread_count();
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) {
      cfg.quick = true;
    } else if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      cfg.criterion = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
      cfg.threads = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--quick] [--criterion N] [--threads N]\n", argv[0]);
      return 2;
    }
  }

  auto results = inhomog::run_acceptance(cfg);
  bool all = true;
  for (const auto& r : results) {
    std::printf("%s criterion %2d: %s [%s] (%.2fs)\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str(), r.seconds);
    if (!r.pass) all = false;
  }
  std::printf("%s\n", all ? "ALL PASS" : "FAILURES PRESENT");
  return all ? 0 : 1;
}
