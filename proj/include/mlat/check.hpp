#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mlat {

/// Outcome of evaluating one named condition. On failure, `witness` holds the first
/// offending tuple of carrier indices (subsets are encoded as their bit masks) and
/// `detail` a readable rendering of it.
struct Check {
  bool holds = true;
  bool vacuous = false;
  std::vector<std::size_t> witness;
  std::string detail;

  void fail(std::vector<std::size_t> w, std::string d = {}) {
    if (!holds) return;
    holds = false;
    witness = std::move(w);
    detail = std::move(d);
  }
  void require(bool cond, std::vector<std::size_t> w, std::string d = {}) {
    if (!cond) fail(std::move(w), std::move(d));
  }

  /// Topological clause that holds trivially when every subset is clopen.
  static Check finite_discrete() {
    Check c;
    c.vacuous = true;
    c.detail = "finite-discrete";
    return c;
  }
  static Check from(bool b) {
    Check c;
    c.holds = b;
    return c;
  }
  explicit operator bool() const { return holds; }
};

struct NamedCheck {
  std::string name;
  Check check;
};

}  // namespace mlat
