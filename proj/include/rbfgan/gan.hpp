#ifndef RBFGAN_GAN_HPP
#define RBFGAN_GAN_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rbfgan/dataset.hpp"
#include "rbfgan/losses.hpp"
#include "rbfgan/matrix.hpp"
#include "rbfgan/network.hpp"
#include "rbfgan/rng.hpp"

namespace rbfgan {

// gan: the generator emits full data rows and the discriminator judges rows.
// cgan: the generator maps [noise | design] to responses and the
// discriminator judges [design | response] pairs.
enum class GanMode { gan, cgan };

const char* gan_mode_name(GanMode m);
GanMode gan_mode_from_name(const std::string& name);

struct GanConfig {
  GanMode mode = GanMode::gan;
  DiscKind disc = DiscKind::fcn;
  std::string g_arch = "G(62,64*1,4)";
  std::string d_arch = "D(4,64*1,1)";
  KernelKind kernel = KernelKind::gaussian;  // single-kernel discriminator body
  bool train_mix = true;                     // cluster coefficients trainable
  std::size_t noise_dim = 62;
  double lr = 1e-4;
  std::size_t batch = 128;
  std::size_t epochs = 2000;
  std::uint64_t seed = 1;
  std::size_t d_steps = 1;                   // discriminator updates per batch
  double clamp_eps = kDefaultClampEps;
  std::size_t eval_draws = 1;                // noise draws averaged at eval time
};

// ConfigError on any violated bound (counts positive, eps in (0, 0.1), ...).
void validate_gan_config(const GanConfig& cfg);

// Every consumer of randomness gets its own stream, derived from the root
// seed in this fixed order. Adding draws to one phase can then never shift
// another phase's stream.
struct SeedStreams {
  std::uint64_t init;   // parameter initialization
  std::uint64_t data;   // epoch shuffles
  std::uint64_t noise;  // training-time generator noise
  std::uint64_t eval;   // fixed evaluation noise, drawn once
};

SeedStreams derive_streams(std::uint64_t seed);

// ---------------------------------------------------------------------------
// Training trace: one row per epoch, serialized as CSV with 17-digit values
// so reruns are byte-identical.

struct TraceRow {
  std::size_t epoch = 0;
  double d_loss = 0.0;
  double g_loss = 0.0;
  double val_mse = 0.0;
};

struct TrainingTrace {
  std::vector<TraceRow> rows;
};

void trace_save_csv(const std::string& path, const TrainingTrace& trace);
TrainingTrace trace_load_csv(const std::string& path);

// The per-epoch validation MSE column as a plain series.
std::vector<double> trace_val_series(const TrainingTrace& trace);

// ---------------------------------------------------------------------------
// Model assembly

struct GanModel {
  GanConfig config;
  std::size_t design_dim = 0;
  std::size_t response_dim = 0;
  DenseStack generator;
  Discriminator disc;
  NormStats stats;  // full-row column stats: design block then response block
};

// Builds and deterministically initializes both networks. The architecture
// strings must be consistent with the dims: the G input token is the noise
// width, its output token is the full row width (gan) or the response width
// (cgan); the D input token is always design + response.
GanModel build_gan(const GanConfig& cfg, std::size_t design_dim,
                   std::size_t response_dim, const NormStats& stats);

// Scores a batch of generated physical rows; used in gan mode where there is
// no paired ground truth (e.g. mean squared PDE residual, or distance to an
// analytic solution evaluated at the generated design points).
using RowEvaluator = std::function<double(const Matrix& physical_rows)>;

// Adversarial training. Both row matrices are normalized full rows; the
// validation split must be non-empty. gan mode requires an evaluator; cgan
// ignores it and scores generated responses against the held-out ones. A
// non-finite loss aborts with NumericError naming the epoch and batch.
TrainingTrace train_gan(GanModel& model, const Matrix& train_norm,
                        const Matrix& val_norm,
                        const RowEvaluator& plain_eval = nullptr);

// The fixed evaluation noise the trainer uses: eval_draws matrices of
// n_val x noise_dim, all drawn from the eval stream up front.
std::vector<Matrix> make_eval_noise(const GanConfig& cfg, std::size_t n_val);

// One validation score, exactly as the trainer computes it each epoch.
double validation_mse(const GanModel& model, const Matrix& val_norm,
                      const std::vector<Matrix>& eval_noise,
                      const RowEvaluator& plain_eval = nullptr);

// n generated rows in the normalized domain (gan mode only).
Matrix generate(const GanModel& model, SeededRng& rng, std::size_t n);

// Same rows mapped back to physical units.
Matrix generate_physical(const GanModel& model, SeededRng& rng, std::size_t n);

// cgan mode only: physical design points in, physical responses out, averaged
// over k_draws noise draws (averaging commutes with the affine denorm).
Matrix generate_conditional(const GanModel& model, SeededRng& rng,
                            const Matrix& designs_physical, std::size_t k_draws);

// ---------------------------------------------------------------------------
// Plain regression baseline: the generator architecture trained directly on
// design -> response pairs with an MSE objective and the same Adam settings.

struct Regressor {
  GanConfig config;  // lr / batch / epochs / seed / g_arch are the ones used
  std::size_t design_dim = 0;
  std::size_t response_dim = 0;
  DenseStack net;
  NormStats stats;
};

Regressor build_regressor(const GanConfig& cfg, std::size_t design_dim,
                          std::size_t response_dim, const NormStats& stats);

// Trace rows reuse the GAN schema: d_loss holds the epoch-mean training MSE,
// g_loss is zero, val_mse is the physical-unit validation MSE. Zero epochs is
// a no-op returning an empty trace.
TrainingTrace train_regressor(Regressor& model, const Matrix& train_norm,
                              const Matrix& val_norm);

Matrix regressor_predict(const Regressor& model, const Matrix& designs_physical);

}  // namespace rbfgan

#endif  // RBFGAN_GAN_HPP
