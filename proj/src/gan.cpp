#include "rbfgan/gan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "rbfgan/adam.hpp"
#include "rbfgan/arch.hpp"
#include "rbfgan/errors.hpp"
#include "rbfgan/layers.hpp"
#include "rbfgan/metrics.hpp"
#include "rbfgan/text.hpp"

namespace rbfgan {

namespace {

Matrix squash(const Matrix& raw) {
  Matrix out(raw.rows(), raw.cols());
  for (std::size_t r = 0; r < raw.rows(); ++r)
    for (std::size_t c = 0; c < raw.cols(); ++c) out(r, c) = logistic(raw(r, c));
  return out;
}

// Gradient matrices of a dense stack aligned with stack_params order
// (layer0.W, layer0.b, layer1.W, ...).
std::vector<const Matrix*> stack_grad_refs(std::vector<DenseGrads>& grads) {
  std::vector<const Matrix*> out;
  for (DenseGrads& g : grads) {
    out.push_back(&g.dW);
    out.push_back(&g.db);
  }
  return out;
}

std::vector<AdamState> make_states(const std::vector<ParamRef>& params, double lr) {
  std::vector<AdamState> states;
  states.reserve(params.size());
  for (const ParamRef& p : params)
    states.emplace_back(p.value->rows(), p.value->cols(), lr);
  return states;
}

void apply_grads(std::vector<ParamRef>& params, std::vector<AdamState>& states,
                 const std::vector<const Matrix*>& grads) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    adam_step(states[i], *params[i].value, *grads[i]);
    if (params[i].is_width) clamp_widths_floor(*params[i].value);
  }
}

bool parse_index(const std::string& token, std::size_t& out) {
  if (token.empty()) return false;
  std::size_t v = 0;
  for (char ch : token) {
    if (ch < '0' || ch > '9') return false;
    v = v * 10 + static_cast<std::size_t>(ch - '0');
  }
  out = v;
  return true;
}

}  // namespace

const char* gan_mode_name(GanMode m) {
  return m == GanMode::gan ? "gan" : "cgan";
}

GanMode gan_mode_from_name(const std::string& name) {
  if (name == "gan") return GanMode::gan;
  if (name == "cgan") return GanMode::cgan;
  throw ConfigError("unknown mode '" + name + "' (expected gan or cgan)");
}

void validate_gan_config(const GanConfig& cfg) {
  if (cfg.noise_dim == 0) throw ConfigError("noise_dim must be positive");
  if (!(cfg.lr > 0.0) || !std::isfinite(cfg.lr))
    throw ConfigError("lr must be positive and finite");
  if (cfg.batch == 0) throw ConfigError("batch must be positive");
  if (cfg.d_steps == 0) throw ConfigError("d_steps must be positive");
  if (cfg.eval_draws == 0) throw ConfigError("eval_draws must be positive");
  if (!(cfg.clamp_eps > 0.0) || !(cfg.clamp_eps < 0.1))
    throw ConfigError("clamp_eps must lie in (0, 0.1)");
}

SeedStreams derive_streams(std::uint64_t seed) {
  SeededRng root(seed);
  SeedStreams s;
  s.init = root.next_u64();
  s.data = root.next_u64();
  s.noise = root.next_u64();
  s.eval = root.next_u64();
  return s;
}

// ---------------------------------------------------------------------------
// Trace CSV

void trace_save_csv(const std::string& path, const TrainingTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "epoch,d_loss,g_loss,val_mse\n";
  for (const TraceRow& r : trace.rows)
    out << r.epoch << ',' << fmt17(r.d_loss) << ',' << fmt17(r.g_loss) << ','
        << fmt17(r.val_mse) << '\n';
  if (!out) throw IoError("write to '" + path + "' failed");
}

TrainingTrace trace_load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw CsvError("'" + path + "': empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "epoch,d_loss,g_loss,val_mse")
    throw CsvError("'" + path + "': unexpected trace header '" + line + "'");

  TrainingTrace trace;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells = split_on(line, ',');
    if (cells.size() != 4)
      throw CsvError("'" + path + "' line " + std::to_string(lineno) +
                     ": expected 4 cells, got " + std::to_string(cells.size()));
    TraceRow row;
    if (!parse_index(cells[0], row.epoch))
      throw CsvError("'" + path + "' line " + std::to_string(lineno) +
                     ": bad epoch index '" + cells[0] + "'");
    if (!trace.rows.empty() && row.epoch <= trace.rows.back().epoch)
      throw CsvError("'" + path + "' line " + std::to_string(lineno) +
                     ": epoch indices must increase");
    if (!parse_double(cells[1], row.d_loss) || !parse_double(cells[2], row.g_loss) ||
        !parse_double(cells[3], row.val_mse))
      throw CsvError("'" + path + "' line " + std::to_string(lineno) +
                     ": unparseable value");
    trace.rows.push_back(row);
  }
  return trace;
}

std::vector<double> trace_val_series(const TrainingTrace& trace) {
  std::vector<double> out;
  out.reserve(trace.rows.size());
  for (const TraceRow& r : trace.rows) out.push_back(r.val_mse);
  return out;
}

// ---------------------------------------------------------------------------
// Assembly

GanModel build_gan(const GanConfig& cfg, std::size_t design_dim,
                   std::size_t response_dim, const NormStats& stats) {
  validate_gan_config(cfg);
  const std::size_t row_dim = design_dim + response_dim;
  if (row_dim == 0) throw ConfigError("data must have at least one column");
  if (stats.cols() != row_dim)
    throw ConfigError("normalization stats cover " + std::to_string(stats.cols()) +
                      " columns, data has " + std::to_string(row_dim));
  if (cfg.mode == GanMode::cgan && response_dim == 0)
    throw ConfigError("cgan mode needs at least one response column");

  ArchSpec gs = parse_architecture(cfg.g_arch);
  if (gs.role != 'G')
    throw ConfigError("g_arch must be a G(...) architecture, got '" + cfg.g_arch + "'");
  if (gs.in != cfg.noise_dim)
    throw ConfigError("g_arch input width " + std::to_string(gs.in) +
                      " does not match noise_dim " + std::to_string(cfg.noise_dim));
  const std::size_t g_out = cfg.mode == GanMode::cgan ? response_dim : row_dim;
  if (gs.out != g_out)
    throw ConfigError("g_arch output width " + std::to_string(gs.out) + " must be " +
                      std::to_string(g_out) +
                      (cfg.mode == GanMode::cgan ? " (the response width)"
                                                 : " (the full row width)"));
  // In cgan mode the generator input layer additionally receives the design
  // columns; the architecture token names only the noise width.
  const std::size_t g_in = cfg.noise_dim + (cfg.mode == GanMode::cgan ? design_dim : 0);

  ArchSpec ds = parse_architecture(cfg.d_arch);
  if (ds.in != row_dim)
    throw ConfigError("d_arch input width " + std::to_string(ds.in) +
                      " does not match the data row width " + std::to_string(row_dim));

  GanModel m;
  m.config = cfg;
  m.design_dim = design_dim;
  m.response_dim = response_dim;
  m.stats = stats;
  m.generator = make_dense_stack(g_in, gs.hidden, g_out, Activation::relu,
                                 Activation::linear);
  m.disc = make_discriminator(ds, cfg.disc, cfg.kernel, cfg.train_mix);

  SeedStreams streams = derive_streams(cfg.seed);
  SeededRng init_rng(streams.init);
  init_dense_stack(m.generator, init_rng);
  init_discriminator(m.disc, init_rng);
  return m;
}

std::vector<Matrix> make_eval_noise(const GanConfig& cfg, std::size_t n_val) {
  if (n_val == 0) throw ParameterError("evaluation needs at least one row");
  SeededRng eval_rng(derive_streams(cfg.seed).eval);
  std::vector<Matrix> noise;
  noise.reserve(cfg.eval_draws);
  for (std::size_t k = 0; k < cfg.eval_draws; ++k)
    noise.push_back(rng_uniform(eval_rng, n_val, cfg.noise_dim));
  return noise;
}

double validation_mse(const GanModel& model, const Matrix& val_norm,
                      const std::vector<Matrix>& eval_noise,
                      const RowEvaluator& plain_eval) {
  const GanConfig& cfg = model.config;
  const std::size_t row_dim = model.design_dim + model.response_dim;
  if (val_norm.rows() == 0 || val_norm.cols() != row_dim)
    throw DimensionError("validation rows " + val_norm.shape_str() + " for row width " +
                         std::to_string(row_dim));
  if (eval_noise.size() != cfg.eval_draws)
    throw ParameterError("expected " + std::to_string(cfg.eval_draws) +
                         " evaluation noise draws, got " +
                         std::to_string(eval_noise.size()));

  if (cfg.mode == GanMode::gan) {
    if (!plain_eval)
      throw ConfigError("gan mode needs a row evaluator for validation scoring");
    double acc = 0.0;
    for (const Matrix& noise : eval_noise) {
      Matrix rows_norm = stack_forward(model.generator, noise, nullptr);
      acc += plain_eval(denormalize_rows(rows_norm, model.stats));
    }
    return acc / static_cast<double>(eval_noise.size());
  }

  Matrix cond = slice_cols(val_norm, 0, model.design_dim);
  Matrix sum(val_norm.rows(), model.response_dim);
  for (const Matrix& noise : eval_noise)
    sum = add(sum, stack_forward(model.generator, hcat(noise, cond), nullptr));
  Matrix avg = scale(sum, 1.0 / static_cast<double>(eval_noise.size()));

  NormStats rstats = stats_slice(model.stats, model.design_dim, row_dim);
  Matrix pred_phys = denormalize_rows(avg, rstats);
  Matrix actual_phys =
      denormalize_rows(slice_cols(val_norm, model.design_dim, row_dim), rstats);
  return mse(pred_phys, actual_phys);
}

// ---------------------------------------------------------------------------
// Training

TrainingTrace train_gan(GanModel& model, const Matrix& train_norm,
                        const Matrix& val_norm, const RowEvaluator& plain_eval) {
  const GanConfig& cfg = model.config;
  validate_gan_config(cfg);
  const std::size_t row_dim = model.design_dim + model.response_dim;
  const bool conditional = cfg.mode == GanMode::cgan;
  if (train_norm.rows() == 0 || train_norm.cols() != row_dim)
    throw DimensionError("training rows " + train_norm.shape_str() +
                         " for row width " + std::to_string(row_dim));
  if (val_norm.rows() == 0 || val_norm.cols() != row_dim)
    throw ConfigError("training needs a non-empty validation split");
  if (cfg.mode == GanMode::gan && !plain_eval)
    throw ConfigError("gan mode needs a row evaluator for validation scoring");

  SeedStreams streams = derive_streams(cfg.seed);
  SeededRng data_rng(streams.data);
  SeededRng noise_rng(streams.noise);
  const std::vector<Matrix> eval_noise = make_eval_noise(cfg, val_norm.rows());

  std::vector<ParamRef> g_params = stack_params(model.generator, "g");
  std::vector<ParamRef> d_params = disc_params(model.disc);
  std::vector<AdamState> g_states = make_states(g_params, cfg.lr);
  std::vector<AdamState> d_states = make_states(d_params, cfg.lr);

  const std::size_t n = train_norm.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainingTrace trace;
  trace.rows.reserve(cfg.epochs);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_indices(order, data_rng);
    double ld_sum = 0.0, lg_sum = 0.0;
    std::size_t ld_n = 0, lg_n = 0;

    for (std::size_t start = 0; start < n; start += cfg.batch) {
      const std::size_t stop = std::min(n, start + cfg.batch);
      const std::size_t batch_index = start / cfg.batch;
      try {
        std::vector<std::size_t> chunk(order.begin() + static_cast<std::ptrdiff_t>(start),
                                       order.begin() + static_cast<std::ptrdiff_t>(stop));
        Matrix real = take_rows(train_norm, chunk);
        Matrix cond;
        if (conditional) cond = slice_cols(real, 0, model.design_dim);
        const std::size_t nb = real.rows();

        for (std::size_t s = 0; s < cfg.d_steps; ++s) {
          Matrix noise = rng_uniform(noise_rng, nb, cfg.noise_dim);
          Matrix g_in = conditional ? hcat(noise, cond) : std::move(noise);
          Matrix fake_rows = stack_forward(model.generator, g_in, nullptr);
          Matrix d_fake_in = conditional ? hcat(cond, fake_rows) : std::move(fake_rows);

          DiscCache cache_real, cache_fake;
          Matrix p_real = squash(disc_raw(model.disc, real, &cache_real));
          Matrix p_fake = squash(disc_raw(model.disc, d_fake_in, &cache_fake));
          const double ld = d_loss(p_real, p_fake, cfg.clamp_eps);
          if (!std::isfinite(ld)) throw NumericError("non-finite discriminator loss");
          ld_sum += ld;
          ++ld_n;

          DiscGrads grads_real = disc_backward(
              model.disc, cache_real, d_loss_real_grad_raw(p_real, cfg.clamp_eps));
          DiscGrads grads_fake = disc_backward(
              model.disc, cache_fake, d_loss_fake_grad_raw(p_fake, cfg.clamp_eps));
          std::vector<const Matrix*> refs_real = disc_grad_refs(model.disc, grads_real);
          std::vector<const Matrix*> refs_fake = disc_grad_refs(model.disc, grads_fake);
          for (std::size_t i = 0; i < d_params.size(); ++i) {
            Matrix g = add(*refs_real[i], *refs_fake[i]);
            adam_step(d_states[i], *d_params[i].value, g);
            if (d_params[i].is_width) clamp_widths_floor(*d_params[i].value);
          }
        }

        // Generator step: gradients flow through the discriminator into G.
        Matrix noise = rng_uniform(noise_rng, nb, cfg.noise_dim);
        Matrix g_in = conditional ? hcat(noise, cond) : std::move(noise);
        std::vector<DenseCache> g_caches;
        Matrix fake_rows = stack_forward(model.generator, g_in, &g_caches);
        Matrix d_fake_in = conditional ? hcat(cond, fake_rows) : fake_rows;

        DiscCache cache_fake;
        Matrix p_fake = squash(disc_raw(model.disc, d_fake_in, &cache_fake));
        const double lg = g_loss(p_fake, cfg.clamp_eps);
        if (!std::isfinite(lg)) throw NumericError("non-finite generator loss");
        lg_sum += lg;
        ++lg_n;

        DiscGrads through_d = disc_backward(model.disc, cache_fake,
                                            g_loss_grad_raw(p_fake, cfg.clamp_eps));
        Matrix up_g = conditional
                          ? slice_cols(through_d.dinput, model.design_dim, row_dim)
                          : std::move(through_d.dinput);
        std::vector<DenseGrads> g_grads;
        stack_backward(model.generator, g_caches, up_g, &g_grads);
        apply_grads(g_params, g_states, stack_grad_refs(g_grads));
      } catch (const NumericError& e) {
        throw NumericError("epoch " + std::to_string(epoch) + " batch " +
                           std::to_string(batch_index) + ": " + e.what());
      }
    }

    TraceRow row;
    row.epoch = epoch;
    row.d_loss = ld_n ? ld_sum / static_cast<double>(ld_n) : 0.0;
    row.g_loss = lg_n ? lg_sum / static_cast<double>(lg_n) : 0.0;
    row.val_mse = validation_mse(model, val_norm, eval_noise, plain_eval);
    trace.rows.push_back(row);
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Sampling

Matrix generate(const GanModel& model, SeededRng& rng, std::size_t n) {
  if (model.config.mode != GanMode::gan)
    throw ConfigError("free-form generation needs mode gan; use generate_conditional");
  if (n == 0) throw ParameterError("cannot generate zero rows");
  Matrix noise = rng_uniform(rng, n, model.config.noise_dim);
  return stack_forward(model.generator, noise, nullptr);
}

Matrix generate_physical(const GanModel& model, SeededRng& rng, std::size_t n) {
  return denormalize_rows(generate(model, rng, n), model.stats);
}

Matrix generate_conditional(const GanModel& model, SeededRng& rng,
                            const Matrix& designs_physical, std::size_t k_draws) {
  if (model.config.mode != GanMode::cgan)
    throw ConfigError("conditional generation needs mode cgan");
  if (k_draws == 0) throw ParameterError("k_draws must be positive");
  if (designs_physical.rows() == 0 || designs_physical.cols() != model.design_dim)
    throw DimensionError("designs " + designs_physical.shape_str() +
                         " for design width " + std::to_string(model.design_dim));

  const std::size_t row_dim = model.design_dim + model.response_dim;
  Matrix cond = normalize_rows(designs_physical,
                               stats_slice(model.stats, 0, model.design_dim));
  Matrix sum(designs_physical.rows(), model.response_dim);
  for (std::size_t k = 0; k < k_draws; ++k) {
    Matrix noise = rng_uniform(rng, designs_physical.rows(), model.config.noise_dim);
    sum = add(sum, stack_forward(model.generator, hcat(noise, cond), nullptr));
  }
  Matrix avg = scale(sum, 1.0 / static_cast<double>(k_draws));
  return denormalize_rows(avg, stats_slice(model.stats, model.design_dim, row_dim));
}

// ---------------------------------------------------------------------------
// Regression baseline

Regressor build_regressor(const GanConfig& cfg, std::size_t design_dim,
                          std::size_t response_dim, const NormStats& stats) {
  validate_gan_config(cfg);
  if (design_dim == 0 || response_dim == 0)
    throw ConfigError("regression needs at least one design and one response column");
  if (stats.cols() != design_dim + response_dim)
    throw ConfigError("normalization stats cover " + std::to_string(stats.cols()) +
                      " columns, data has " + std::to_string(design_dim + response_dim));

  ArchSpec gs = parse_architecture(cfg.g_arch);
  if (gs.role != 'G')
    throw ConfigError("the regressor uses a G(...) architecture, got '" + cfg.g_arch +
                      "'");
  if (gs.in != design_dim)
    throw ConfigError("regressor input width " + std::to_string(gs.in) +
                      " must equal the design width " + std::to_string(design_dim));
  if (gs.out != response_dim)
    throw ConfigError("regressor output width " + std::to_string(gs.out) +
                      " must equal the response width " + std::to_string(response_dim));

  Regressor m;
  m.config = cfg;
  m.design_dim = design_dim;
  m.response_dim = response_dim;
  m.stats = stats;
  m.net = make_dense_stack(design_dim, gs.hidden, response_dim, Activation::relu,
                           Activation::linear);
  SeededRng init_rng(derive_streams(cfg.seed).init);
  init_dense_stack(m.net, init_rng);
  return m;
}

TrainingTrace train_regressor(Regressor& model, const Matrix& train_norm,
                              const Matrix& val_norm) {
  const GanConfig& cfg = model.config;
  const std::size_t row_dim = model.design_dim + model.response_dim;
  TrainingTrace trace;
  if (cfg.epochs == 0) return trace;  // no-op by contract
  if (train_norm.rows() == 0 || train_norm.cols() != row_dim)
    throw DimensionError("training rows " + train_norm.shape_str() +
                         " for row width " + std::to_string(row_dim));
  if (val_norm.rows() == 0 || val_norm.cols() != row_dim)
    throw ConfigError("training needs a non-empty validation split");

  SeedStreams streams = derive_streams(cfg.seed);
  SeededRng data_rng(streams.data);

  std::vector<ParamRef> params = stack_params(model.net, "g");
  std::vector<AdamState> states = make_states(params, cfg.lr);

  const std::size_t n = train_norm.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  Matrix val_designs = slice_cols(val_norm, 0, model.design_dim);
  NormStats rstats = stats_slice(model.stats, model.design_dim, row_dim);
  Matrix val_actual_phys =
      denormalize_rows(slice_cols(val_norm, model.design_dim, row_dim), rstats);

  trace.rows.reserve(cfg.epochs);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_indices(order, data_rng);
    double loss_sum = 0.0;
    std::size_t loss_n = 0;

    for (std::size_t start = 0; start < n; start += cfg.batch) {
      const std::size_t stop = std::min(n, start + cfg.batch);
      const std::size_t batch_index = start / cfg.batch;
      try {
        std::vector<std::size_t> chunk(order.begin() + static_cast<std::ptrdiff_t>(start),
                                       order.begin() + static_cast<std::ptrdiff_t>(stop));
        Matrix rows = take_rows(train_norm, chunk);
        Matrix designs = slice_cols(rows, 0, model.design_dim);
        Matrix actual = slice_cols(rows, model.design_dim, row_dim);

        std::vector<DenseCache> caches;
        Matrix pred = stack_forward(model.net, designs, &caches);
        const double loss = mse(pred, actual);
        if (!std::isfinite(loss)) throw NumericError("non-finite training loss");
        loss_sum += loss;
        ++loss_n;

        Matrix up = scale(sub(pred, actual), 2.0 / static_cast<double>(rows.rows()));
        std::vector<DenseGrads> grads;
        stack_backward(model.net, caches, up, &grads);
        apply_grads(params, states, stack_grad_refs(grads));
      } catch (const NumericError& e) {
        throw NumericError("epoch " + std::to_string(epoch) + " batch " +
                           std::to_string(batch_index) + ": " + e.what());
      }
    }

    Matrix val_pred_phys =
        denormalize_rows(stack_forward(model.net, val_designs, nullptr), rstats);
    TraceRow row;
    row.epoch = epoch;
    row.d_loss = loss_n ? loss_sum / static_cast<double>(loss_n) : 0.0;
    row.g_loss = 0.0;
    row.val_mse = mse(val_pred_phys, val_actual_phys);
    trace.rows.push_back(row);
  }
  return trace;
}

Matrix regressor_predict(const Regressor& model, const Matrix& designs_physical) {
  if (designs_physical.rows() == 0 || designs_physical.cols() != model.design_dim)
    throw DimensionError("designs " + designs_physical.shape_str() +
                         " for design width " + std::to_string(model.design_dim));
  const std::size_t row_dim = model.design_dim + model.response_dim;
  Matrix designs = normalize_rows(designs_physical,
                                  stats_slice(model.stats, 0, model.design_dim));
  Matrix pred = stack_forward(model.net, designs, nullptr);
  return denormalize_rows(pred, stats_slice(model.stats, model.design_dim, row_dim));
}

}  // namespace rbfgan
