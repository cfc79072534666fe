#include "rbfgan/arch.hpp"

#include <cctype>

#include "rbfgan/errors.hpp"

namespace rbfgan {

namespace {

// Minimal cursor over the text; every throw carries the current position.
struct Cursor {
  const std::string& s;
  std::size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool at_end() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
  void expect(char c, const char* what) {
    skip_ws();
    if (i >= s.size() || s[i] != c)
      throw ArchParseError(std::string("expected '") + c + "' " + what, i);
    ++i;
  }
  bool accept(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  std::size_t number(const char* what) {
    skip_ws();
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      throw ArchParseError(std::string("expected ") + what, i);
    const std::size_t start = i;
    unsigned long long v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      v = v * 10 + static_cast<unsigned long long>(s[i] - '0');
      if (v > 100'000'000ull) throw ArchParseError(std::string(what) + " is absurdly large", start);
      ++i;
    }
    if (v == 0) throw ArchParseError(std::string(what) + " must be positive", start);
    return static_cast<std::size_t>(v);
  }
};

}  // namespace

ArchSpec parse_architecture(const std::string& text) {
  Cursor c{text};
  ArchSpec spec;

  c.skip_ws();
  if (c.at_end()) throw ArchParseError("empty architecture string", 0);
  const char role = text[c.i];
  if (role != 'G' && role != 'D')
    throw ArchParseError("architecture must start with G or D", c.i);
  spec.role = role;
  ++c.i;
  c.expect('(', "after the role");
  spec.in = c.number("input dimension");
  c.expect(',', "after the input dimension");

  // middle section: cluster list or width tokens; the final token before ')'
  // is the output dimension.
  if (c.peek() == '(') {
    if (role != 'D')
      throw ArchParseError("cluster form (q1,q2,...) is only valid for D", c.i);
    c.expect('(', "to open the cluster list");
    do {
      spec.clusters.push_back(c.number("cluster size"));
    } while (c.accept(','));
    c.expect(')', "to close the cluster list");
    if (spec.clusters.size() < 2)
      throw ArchParseError("cluster form needs at least two cluster sizes", c.i);
    c.expect(',', "after the cluster list");
    spec.out = c.number("output dimension");
  } else {
    // collect tokens; the last one is the output dimension
    std::vector<std::size_t> widths;
    bool saw_out = false;
    while (!saw_out) {
      const std::size_t tok_pos = c.i;
      const std::size_t n = c.number("layer width");
      if (c.accept('*')) {
        const std::size_t k = c.number("repeat count");
        if (k > 64) throw ArchParseError("repeat count is absurdly large", tok_pos);
        for (std::size_t r = 0; r < k; ++r) widths.push_back(n);
        c.expect(',', "after a repeated width group");
      } else if (c.accept(',')) {
        widths.push_back(n);
      } else {
        spec.out = n;  // no separator follows: this token is the output dim
        saw_out = true;
      }
    }
    spec.hidden = std::move(widths);
    if (spec.hidden.empty())
      throw ArchParseError("expected at least one hidden layer between input and output", c.i);
  }
  c.expect(')', "to close the architecture");
  if (!c.at_end()) throw ArchParseError("trailing characters after ')'", c.i);

  if (role == 'D' && spec.out != 1)
    throw ArchParseError("discriminators must end in output dimension 1", 0);
  return spec;
}

std::string arch_to_string(const ArchSpec& spec) {
  std::string s(1, spec.role);
  s += '(' + std::to_string(spec.in) + ',';
  if (spec.is_cluster()) {
    s += '(';
    for (std::size_t i = 0; i < spec.clusters.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(spec.clusters[i]);
    }
    s += ')';
  } else {
    for (std::size_t i = 0; i < spec.hidden.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(spec.hidden[i]);
    }
  }
  s += ',' + std::to_string(spec.out) + ')';
  return s;
}

}  // namespace rbfgan
