#ifndef RBFGAN_NETWORK_HPP
#define RBFGAN_NETWORK_HPP

#include <string>
#include <vector>

#include "rbfgan/arch.hpp"
#include "rbfgan/layers.hpp"
#include "rbfgan/matrix.hpp"
#include "rbfgan/rng.hpp"

namespace rbfgan {

// Handle to one trainable matrix; is_width marks RBF widths, which are
// clamped back to the positivity floor after every optimizer step.
struct ParamRef {
  std::string name;
  Matrix* value = nullptr;
  bool is_width = false;
};

// ---------------------------------------------------------------------------
// Dense feed-forward stack: the generator, the FCN discriminator body and
// the regression baseline are all instances of this.

struct DenseStack {
  std::vector<DenseLayer> layers;

  std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().W.cols(); }
  std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().W.rows(); }
};

DenseStack make_dense_stack(std::size_t in, const std::vector<std::size_t>& hidden,
                            std::size_t out, Activation hidden_act, Activation out_act);

// Weights uniform in +-sqrt(6/(fan_in+fan_out)), biases zero. Draw order is
// layer by layer, weight matrix row-major; it is part of the determinism
// contract.
void init_dense_stack(DenseStack& stack, SeededRng& rng);

Matrix stack_forward(const DenseStack& stack, const Matrix& batch,
                     std::vector<DenseCache>* caches = nullptr);

// Returns dL/d(batch); per-layer parameter grads land in `grads` (same
// order as stack.layers) when non-null.
Matrix stack_backward(const DenseStack& stack, const std::vector<DenseCache>& caches,
                      const Matrix& upstream, std::vector<DenseGrads>* grads);

std::vector<ParamRef> stack_params(DenseStack& stack, const std::string& prefix);

// ---------------------------------------------------------------------------
// Discriminator: one of three interchangeable bodies producing a raw score
// per sample, squashed by the logistic outside this module.

enum class DiscKind { fcn, rbf, rbfc };

const char* disc_kind_name(DiscKind k);
DiscKind disc_kind_from_name(const std::string& name);

struct RbfDisc {
  RbfLayer rbf;
  Matrix head_w;   // q x 1
  Matrix head_w0;  // 1 x 1, kept as a matrix so optimizer plumbing is uniform
};

struct Discriminator {
  DiscKind kind = DiscKind::fcn;
  DenseStack fcn;        // kind == fcn: hidden relu layers + linear 1-dim head
  RbfDisc rbf;           // kind == rbf
  RbfClusterLayer rbfc;  // kind == rbfc
  bool train_mix = true; // false freezes the cluster coefficients (bias stays trained)

  std::size_t input_dim() const;
};

// Builds the body selected by `kind` from a D(...) spec. The single-kernel
// body uses `kernel`; the cluster body cycles gaussian, laplace,
// inverse-multiquadrics by cluster index. Cluster specs demand kind rbfc and
// vice versa; rbf kind requires exactly one hidden group (the neuron count).
Discriminator make_discriminator(const ArchSpec& spec, DiscKind kind, KernelKind kernel,
                                 bool train_mix);

// Centers uniform in [0,1); widths from N(0.5, 0.2) clamped to the floor;
// head/output weights Glorot; mixing coefficients bias 0 and 1/m each.
void init_discriminator(Discriminator& d, SeededRng& rng);

struct DiscCache {
  std::vector<DenseCache> fcn;
  RbfCache rbf;
  RbfcCache rbfc;
};

// Raw (pre-logistic) scores, n x 1.
Matrix disc_raw(const Discriminator& d, const Matrix& batch, DiscCache* cache = nullptr);

struct DiscGrads {
  std::vector<DenseGrads> fcn;
  RbfGrads rbf;
  Matrix rbf_dw0;  // 1 x 1 wrapper around RbfGrads::dw0
  RbfcGrads rbfc;
  Matrix dinput;
};

// upstream is dL/d(raw). A frozen mix yields zero coefficient gradients, so
// the optimizer provably never moves them.
DiscGrads disc_backward(const Discriminator& d, const DiscCache& cache, const Matrix& upstream);

// Stable parameter ordering; names are the checkpoint names.
std::vector<ParamRef> disc_params(Discriminator& d);

// Gradient matrices aligned one-to-one with disc_params.
std::vector<const Matrix*> disc_grad_refs(const Discriminator& d, DiscGrads& g);

// Clamp every width in-place to the positivity floor.
void clamp_widths_floor(Matrix& widths);

}  // namespace rbfgan

#endif  // RBFGAN_NETWORK_HPP
