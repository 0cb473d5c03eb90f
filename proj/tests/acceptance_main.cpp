// Acceptance suite: one line per criterion, non-zero exit on any failure.
#include "repp/acceptance.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

namespace {

constexpr std::uint64_t kSeed = 20240601;

}  // namespace

int main(int argc, char** argv) {
  repp::AcceptanceOptions opt;
  opt.seed = kSeed;
  opt.scratch = std::filesystem::temp_directory_path() / "repp_acceptance_scratch";
  for (int i = 1; i < argc; ++i) opt.only.insert(std::atoi(argv[i]));
  const auto results = repp::run_acceptance(opt, std::cout);
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.pass ? 1 : 0;
  std::cout << passed << "/" << results.size() << " criteria pass" << std::endl;
  return passed == results.size() ? 0 : 1;
}
