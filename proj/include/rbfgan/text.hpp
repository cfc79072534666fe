#ifndef RBFGAN_TEXT_HPP
#define RBFGAN_TEXT_HPP

#include <string>
#include <vector>

namespace rbfgan {

// 17 significant digits: enough for a lossless double round-trip, and stable
// across reruns, which the byte-identity guarantees rely on.
std::string fmt17(double v);

// Strict double parse: the whole token must be consumed. Returns false on
// junk; the caller decides which error to raise.
bool parse_double(const std::string& token, double& out);

std::vector<std::string> split_on(const std::string& line, char sep);
std::string trim(const std::string& s);

}  // namespace rbfgan

#endif  // RBFGAN_TEXT_HPP
