// Release-gate runner: one pass/fail line per criterion, nonzero exit on any
// failure. Usage: acceptance [--scratch DIR] [--threads N] [--tamper-profile] [ids...]
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "fracneumann/acceptance.hpp"

int main(int argc, char** argv) {
  fracneumann::acceptance::Options opts;
  if (const char* env = std::getenv("FRACNEUMANN_THREADS")) opts.threads = std::atoi(env);
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--scratch" && i + 1 < argc) {
      opts.scratch_dir = argv[++i];
    } else if (arg == "--threads" && i + 1 < argc) {
      opts.threads = std::atoi(argv[++i]);
    } else if (arg == "--tamper-profile") {
      opts.rho_tamper = true;
    } else {
      const int id = std::atoi(arg.c_str());
      if (id < 1 || id > 14) {
        std::cerr << "unknown argument or criterion id: " << arg << "\n";
        return 2;
      }
      ids.push_back(id);
    }
  }
  try {
    const auto results =
        ids.empty() ? fracneumann::acceptance::run_all(opts) : fracneumann::acceptance::run(opts, ids);
    return fracneumann::acceptance::report(results, std::cout) ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
