#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

namespace omegafold::test {

// Seed shared by all randomized tests; set by --seed=N or OMEGAFOLD_SEED.
std::uint64_t seed();

inline std::string fixture_path(const std::string& name) {
  return std::string(OMEGAFOLD_FIXTURES) + "/" + name;
}

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace omegafold::test
