#pragma once

#include "fourmg/spectrum.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace fourmg {

struct VerifyOutcome {
  std::vector<BoundCheck> checks;
  bool pass = true;

  void add(const BoundCheck& c) {
    checks.push_back(c);
    pass = pass && c.satisfied;
  }
};

/// suite: "lemmas", "theorems", "smw" or "all". Property checks run at
/// verification scale (levels 2-3, plus levels 4-5 where a scaling law
/// needs them). Progress and margins go to log when given.
VerifyOutcome run_verify_suite(const std::string& suite, std::ostream* log = nullptr);

void print_checks(const VerifyOutcome& out, std::ostream& os);

} // namespace fourmg
