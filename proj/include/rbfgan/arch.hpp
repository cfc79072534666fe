#ifndef RBFGAN_ARCH_HPP
#define RBFGAN_ARCH_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace rbfgan {

// Parsed network shape, mirroring the compact notation used in the run
// configs: G(62,128*2,4) is a generator 62 -> 128 -> 128 -> 4, and
// D(4,(42,43,43),1) is a cluster discriminator with three RBF clusters.
struct ArchSpec {
  char role = 'G';                    // 'G' or 'D'
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<std::size_t> hidden;    // dense widths, in order (empty for cluster form)
  std::vector<std::size_t> clusters;  // cluster sizes; non-empty selects the cluster form

  bool is_cluster() const { return !clusters.empty(); }
};

// Grammar: ROLE '(' in ',' middle ',' out ')' where middle is either a
// comma-separated run of width tokens -- each `h` or `h*k`, k repeats -- or a
// parenthesized cluster list `(q1,q2,...)` with at least two sizes (only for
// D). Spaces are allowed between tokens. Discriminators must end in 1.
// Violations raise ArchParseError carrying the character position.
ArchSpec parse_architecture(const std::string& text);

// Canonical text form (expanded widths, no repeat shorthand).
std::string arch_to_string(const ArchSpec& spec);

}  // namespace rbfgan

#endif  // RBFGAN_ARCH_HPP
