#include "rbfgan/checkpoint.hpp"

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rbfgan/errors.hpp"
#include "rbfgan/text.hpp"

namespace rbfgan {

namespace {

constexpr const char* kMagic = "RBFGAN-CKPT";
constexpr const char* kHeader = "RBFGAN-CKPT v1";

// Ordered (name, matrix) view over everything a checkpoint stores. The
// param accessors want a mutable model; the save path only reads through it.
std::vector<std::pair<std::string, Matrix*>> named_params(GanModel& m) {
  std::vector<std::pair<std::string, Matrix*>> out;
  for (ParamRef& p : stack_params(m.generator, "g")) out.emplace_back(p.name, p.value);
  for (ParamRef& p : disc_params(m.disc)) out.emplace_back(p.name, p.value);
  return out;
}

Matrix stats_row(const std::vector<double>& v) {
  Matrix m(1, v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m(0, i) = v[i];
  return m;
}

void write_param(std::ofstream& out, const std::string& name, const Matrix& m) {
  out << "param " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << fmt17(m(r, c));
    }
    out << '\n';
  }
}

bool parse_u64(const std::string& token, std::uint64_t& out) {
  if (token.empty()) return false;
  std::uint64_t v = 0;
  for (char ch : token) {
    if (ch < '0' || ch > '9') return false;
    const std::uint64_t d = static_cast<std::uint64_t>(ch - '0');
    if (v > (UINT64_MAX - d) / 10) return false;
    v = v * 10 + d;
  }
  out = v;
  return true;
}

std::uint64_t need_u64(const std::map<std::string, std::string>& kv,
                       const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end())
    throw CheckpointFormatError("checkpoint config misses key '" + key + "'");
  std::uint64_t v = 0;
  if (!parse_u64(it->second, v))
    throw CheckpointFormatError("checkpoint key '" + key + "': bad integer '" +
                                it->second + "'");
  return v;
}

double need_double(const std::map<std::string, std::string>& kv,
                   const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end())
    throw CheckpointFormatError("checkpoint config misses key '" + key + "'");
  double v = 0.0;
  if (!parse_double(it->second, v))
    throw CheckpointFormatError("checkpoint key '" + key + "': bad number '" +
                                it->second + "'");
  return v;
}

std::string need_str(const std::map<std::string, std::string>& kv,
                     const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end())
    throw CheckpointFormatError("checkpoint config misses key '" + key + "'");
  return it->second;
}

bool need_bool(const std::map<std::string, std::string>& kv, const std::string& key) {
  const std::string v = need_str(kv, key);
  if (v == "true") return true;
  if (v == "false") return false;
  throw CheckpointFormatError("checkpoint key '" + key + "': bad bool '" + v + "'");
}

// getline with CR stripping; false means clean EOF.
bool next_line(std::ifstream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

void checkpoint_save(const std::string& path, const GanModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");

  const GanConfig& cfg = model.config;
  out << kHeader << '\n';
  out << "config_begin\n";
  out << "mode = " << gan_mode_name(cfg.mode) << '\n';
  out << "disc = " << disc_kind_name(cfg.disc) << '\n';
  out << "g_arch = " << cfg.g_arch << '\n';
  out << "d_arch = " << cfg.d_arch << '\n';
  out << "kernel = " << kernel_name(cfg.kernel) << '\n';
  out << "train_mix = " << (cfg.train_mix ? "true" : "false") << '\n';
  out << "noise_dim = " << cfg.noise_dim << '\n';
  out << "lr = " << fmt17(cfg.lr) << '\n';
  out << "batch = " << cfg.batch << '\n';
  out << "epochs = " << cfg.epochs << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "d_steps = " << cfg.d_steps << '\n';
  out << "clamp_eps = " << fmt17(cfg.clamp_eps) << '\n';
  out << "eval_draws = " << cfg.eval_draws << '\n';
  out << "design_dim = " << model.design_dim << '\n';
  out << "response_dim = " << model.response_dim << '\n';
  out << "config_end\n";

  GanModel& mutable_model = const_cast<GanModel&>(model);
  for (const auto& [name, mat] : named_params(mutable_model)) write_param(out, name, *mat);
  write_param(out, "norm.min", stats_row(model.stats.min));
  write_param(out, "norm.max", stats_row(model.stats.max));
  out << "end\n";
  if (!out) throw IoError("write to '" + path + "' failed");
}

GanModel checkpoint_load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::string line;
  if (!next_line(in, line)) throw CheckpointFormatError("'" + path + "': empty file");
  if (line != kHeader) {
    if (line.rfind(kMagic, 0) == 0)
      throw CheckpointVersionError("'" + path + "': unsupported checkpoint version '" +
                                   trim(line.substr(std::string(kMagic).size())) +
                                   "' (this build reads v1)");
    throw CheckpointFormatError("'" + path + "': not a checkpoint file");
  }

  if (!next_line(in, line) || line != "config_begin")
    throw CheckpointFormatError("'" + path + "': missing config block");

  std::map<std::string, std::string> kv;
  for (;;) {
    if (!next_line(in, line))
      throw CheckpointFormatError("'" + path + "': truncated inside config block");
    if (line == "config_end") break;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw CheckpointFormatError("'" + path + "': bad config line '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || !kv.emplace(key, val).second)
      throw CheckpointFormatError("'" + path + "': bad or duplicate config key '" +
                                  key + "'");
  }

  GanConfig cfg;
  std::size_t design_dim = 0, response_dim = 0;
  GanModel model;
  try {
    cfg.mode = gan_mode_from_name(need_str(kv, "mode"));
    cfg.disc = disc_kind_from_name(need_str(kv, "disc"));
    cfg.g_arch = need_str(kv, "g_arch");
    cfg.d_arch = need_str(kv, "d_arch");
    cfg.kernel = kernel_from_name(need_str(kv, "kernel"));
    cfg.train_mix = need_bool(kv, "train_mix");
    cfg.noise_dim = static_cast<std::size_t>(need_u64(kv, "noise_dim"));
    cfg.lr = need_double(kv, "lr");
    cfg.batch = static_cast<std::size_t>(need_u64(kv, "batch"));
    cfg.epochs = static_cast<std::size_t>(need_u64(kv, "epochs"));
    cfg.seed = need_u64(kv, "seed");
    cfg.d_steps = static_cast<std::size_t>(need_u64(kv, "d_steps"));
    cfg.clamp_eps = need_double(kv, "clamp_eps");
    cfg.eval_draws = static_cast<std::size_t>(need_u64(kv, "eval_draws"));
    design_dim = static_cast<std::size_t>(need_u64(kv, "design_dim"));
    response_dim = static_cast<std::size_t>(need_u64(kv, "response_dim"));
    if (kv.size() != 16)
      throw CheckpointFormatError("'" + path + "': unexpected config keys");

    NormStats placeholder;
    placeholder.min.assign(design_dim + response_dim, 0.0);
    placeholder.max.assign(design_dim + response_dim, 1.0);
    model = build_gan(cfg, design_dim, response_dim, placeholder);
  } catch (const CheckpointError&) {
    throw;
  } catch (const Error& e) {
    throw CheckpointFormatError("'" + path + "': invalid config: " + e.what());
  }

  // Every parameter the rebuilt model owns must be filled exactly once, the
  // stats rows included; only then does the loaded model replace anything.
  std::map<std::string, Matrix*> expected;
  for (const auto& [name, mat] : named_params(model)) expected.emplace(name, mat);
  Matrix norm_min(1, design_dim + response_dim);
  Matrix norm_max(1, design_dim + response_dim);
  expected.emplace("norm.min", &norm_min);
  expected.emplace("norm.max", &norm_max);
  std::set<std::string> seen;

  bool got_end = false;
  while (next_line(in, line)) {
    if (line == "end") {
      got_end = true;
      break;
    }
    std::vector<std::string> head = split_on(line, ' ');
    if (head.size() != 4 || head[0] != "param")
      throw CheckpointFormatError("'" + path + "': expected a param block, got '" +
                                  line + "'");
    const std::string& name = head[1];
    std::uint64_t rows = 0, cols = 0;
    if (!parse_u64(head[2], rows) || !parse_u64(head[3], cols))
      throw CheckpointFormatError("'" + path + "': bad shape in '" + line + "'");

    auto it = expected.find(name);
    if (it == expected.end())
      throw CheckpointFormatError("'" + path + "': unknown parameter '" + name + "'");
    if (!seen.insert(name).second)
      throw CheckpointFormatError("'" + path + "': duplicate parameter '" + name + "'");
    Matrix& target = *it->second;
    if (rows != target.rows() || cols != target.cols())
      throw CheckpointShapeError("'" + path + "': parameter '" + name + "' is " +
                                 std::to_string(rows) + " x " + std::to_string(cols) +
                                 " but the architecture needs " + target.shape_str());

    for (std::size_t r = 0; r < rows; ++r) {
      if (!next_line(in, line))
        throw CheckpointFormatError("'" + path + "': truncated inside parameter '" +
                                    name + "'");
      std::vector<std::string> cells = split_on(line, ' ');
      if (cells.size() != cols)
        throw CheckpointFormatError("'" + path + "': parameter '" + name + "' row " +
                                    std::to_string(r) + " has " +
                                    std::to_string(cells.size()) + " values, needs " +
                                    std::to_string(cols));
      for (std::size_t c = 0; c < cols; ++c) {
        double v = 0.0;
        if (!parse_double(cells[c], v))
          throw CheckpointFormatError("'" + path + "': parameter '" + name +
                                      "': unparseable value '" + cells[c] + "'");
        target(r, c) = v;
      }
    }
    target.require_finite("checkpoint parameter " + name);
  }
  if (!got_end)
    throw CheckpointFormatError("'" + path + "': truncated checkpoint (missing end)");
  if (next_line(in, line) && !trim(line).empty())
    throw CheckpointFormatError("'" + path + "': trailing content after end");
  for (const auto& [name, mat] : expected) {
    (void)mat;
    if (!seen.count(name))
      throw CheckpointFormatError("'" + path + "': missing parameter '" + name + "'");
  }

  for (std::size_t c = 0; c < model.stats.cols(); ++c) {
    model.stats.min[c] = norm_min(0, c);
    model.stats.max[c] = norm_max(0, c);
  }
  return model;
}

}  // namespace rbfgan
