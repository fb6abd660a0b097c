#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mixedlab::harness {

/// Deliberate defects for checking that the self-test notices them.
enum class Fault {
  None,
  MassAsymmetry,  ///< perturbs one off-diagonal entry of a mass matrix
};

Fault parse_fault(const std::string& name);

struct SelftestGroup {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Invariant checks on small meshes (n <= 4), one group per concern.
std::vector<SelftestGroup> run_selftest(Fault fault = Fault::None);

/// One line per group; returns true when every group passed.
bool write_selftest(std::ostream& out, const std::vector<SelftestGroup>& groups);

}  // namespace mixedlab::harness
