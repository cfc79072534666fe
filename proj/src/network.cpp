#include "rbfgan/network.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rbfgan/errors.hpp"

namespace rbfgan {

namespace {

// Glorot-uniform fill: entries uniform in +-sqrt(6/(fan_in+fan_out)),
// consumed row-major so the draw count and order are fixed.
void fill_glorot(Matrix& w, std::size_t fan_in, std::size_t fan_out, SeededRng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (std::size_t r = 0; r < w.rows(); ++r)
    for (std::size_t c = 0; c < w.cols(); ++c)
      w(r, c) = (2.0 * rng.next_uniform() - 1.0) * limit;
}

RbfLayer make_rbf_layer(std::size_t neurons, std::size_t dim, KernelKind kernel) {
  RbfLayer layer;
  layer.centers = Matrix(neurons, dim);
  layer.widths = Matrix(neurons, 1, kSigmaMin);
  layer.kernel = kernel;
  return layer;
}

void init_rbf_layer(RbfLayer& layer, SeededRng& rng) {
  layer.centers = rng_uniform(rng, layer.neurons(), layer.input_dim());
  layer.widths = rng_normal(rng, 0.5, 0.2, layer.neurons(), 1);
  clamp_widths_floor(layer.widths);
}

KernelKind cluster_kernel(std::size_t index) {
  switch (index % 3) {
    case 0: return KernelKind::gaussian;
    case 1: return KernelKind::laplace;
    default: return KernelKind::inverse_multiquadrics;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Dense stack

DenseStack make_dense_stack(std::size_t in, const std::vector<std::size_t>& hidden,
                            std::size_t out, Activation hidden_act, Activation out_act) {
  if (in == 0 || out == 0)
    throw ParameterError("dense stack needs positive input and output dims");
  for (std::size_t h : hidden)
    if (h == 0) throw ParameterError("dense stack hidden widths must be positive");

  DenseStack stack;
  std::size_t prev = in;
  for (std::size_t h : hidden) {
    DenseLayer layer;
    layer.W = Matrix(h, prev);
    layer.b = Matrix(1, h);
    layer.act = hidden_act;
    stack.layers.push_back(std::move(layer));
    prev = h;
  }
  DenseLayer head;
  head.W = Matrix(out, prev);
  head.b = Matrix(1, out);
  head.act = out_act;
  stack.layers.push_back(std::move(head));
  return stack;
}

void init_dense_stack(DenseStack& stack, SeededRng& rng) {
  for (DenseLayer& layer : stack.layers) {
    fill_glorot(layer.W, layer.W.cols(), layer.W.rows(), rng);
    layer.b.fill(0.0);
  }
}

Matrix stack_forward(const DenseStack& stack, const Matrix& batch,
                     std::vector<DenseCache>* caches) {
  if (stack.layers.empty()) throw ParameterError("dense stack has no layers");
  if (caches) {
    caches->clear();
    caches->resize(stack.layers.size());
  }
  Matrix cur = batch;
  for (std::size_t i = 0; i < stack.layers.size(); ++i)
    cur = dense_forward(stack.layers[i], cur, caches ? &(*caches)[i] : nullptr);
  return cur;
}

Matrix stack_backward(const DenseStack& stack, const std::vector<DenseCache>& caches,
                      const Matrix& upstream, std::vector<DenseGrads>* grads) {
  if (caches.size() != stack.layers.size())
    throw DimensionError("cache count " + std::to_string(caches.size()) +
                         " does not match layer count " +
                         std::to_string(stack.layers.size()));
  if (grads) {
    grads->clear();
    grads->resize(stack.layers.size());
  }
  Matrix up = upstream;
  for (std::size_t i = stack.layers.size(); i-- > 0;) {
    DenseGrads g = dense_backward(stack.layers[i], caches[i], up);
    up = g.dinput;
    if (grads) (*grads)[i] = std::move(g);
  }
  return up;
}

std::vector<ParamRef> stack_params(DenseStack& stack, const std::string& prefix) {
  std::vector<ParamRef> out;
  for (std::size_t i = 0; i < stack.layers.size(); ++i) {
    const std::string base = prefix + ".layer" + std::to_string(i);
    out.push_back({base + ".W", &stack.layers[i].W, false});
    out.push_back({base + ".b", &stack.layers[i].b, false});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Discriminator

const char* disc_kind_name(DiscKind k) {
  switch (k) {
    case DiscKind::fcn: return "fcn";
    case DiscKind::rbf: return "rbf";
    case DiscKind::rbfc: return "rbfc";
  }
  return "?";
}

DiscKind disc_kind_from_name(const std::string& name) {
  if (name == "fcn") return DiscKind::fcn;
  if (name == "rbf") return DiscKind::rbf;
  if (name == "rbfc") return DiscKind::rbfc;
  throw ConfigError("unknown discriminator kind '" + name +
                    "' (expected fcn, rbf or rbfc)");
}

std::size_t Discriminator::input_dim() const {
  switch (kind) {
    case DiscKind::fcn: return fcn.input_dim();
    case DiscKind::rbf: return rbf.rbf.input_dim();
    case DiscKind::rbfc:
      return rbfc.clusters.empty() ? 0 : rbfc.clusters.front().rbf.input_dim();
  }
  return 0;
}

Discriminator make_discriminator(const ArchSpec& spec, DiscKind kind, KernelKind kernel,
                                 bool train_mix) {
  if (spec.role != 'D')
    throw ConfigError("discriminator needs a D(...) architecture, got role " +
                      std::string(1, spec.role));
  Discriminator d;
  d.kind = kind;
  d.train_mix = train_mix;
  switch (kind) {
    case DiscKind::fcn: {
      if (spec.is_cluster())
        throw ConfigError("a cluster architecture requires the rbfc discriminator");
      d.fcn = make_dense_stack(spec.in, spec.hidden, spec.out, Activation::relu,
                               Activation::linear);
      break;
    }
    case DiscKind::rbf: {
      if (spec.is_cluster())
        throw ConfigError("a cluster architecture requires the rbfc discriminator");
      if (spec.hidden.size() != 1)
        throw ConfigError(
            "the rbf discriminator takes exactly one hidden width (the neuron "
            "count), got " +
            std::to_string(spec.hidden.size()) + " groups");
      const std::size_t q = spec.hidden[0];
      d.rbf.rbf = make_rbf_layer(q, spec.in, kernel);
      d.rbf.head_w = Matrix(q, 1);
      d.rbf.head_w0 = Matrix(1, 1);
      break;
    }
    case DiscKind::rbfc: {
      if (!spec.is_cluster())
        throw ConfigError(
            "the rbfc discriminator needs a parenthesized cluster list, e.g. "
            "D(4,(42,43,43),1)");
      const std::size_t m = spec.clusters.size();
      for (std::size_t z = 0; z < m; ++z) {
        RbfCluster cl;
        cl.rbf = make_rbf_layer(spec.clusters[z], spec.in, cluster_kernel(z));
        cl.w = Matrix(spec.clusters[z], 1);
        d.rbfc.clusters.push_back(std::move(cl));
      }
      d.rbfc.mix = Matrix(1, m + 1);
      break;
    }
  }
  return d;
}

void init_discriminator(Discriminator& d, SeededRng& rng) {
  switch (d.kind) {
    case DiscKind::fcn:
      init_dense_stack(d.fcn, rng);
      break;
    case DiscKind::rbf: {
      init_rbf_layer(d.rbf.rbf, rng);
      fill_glorot(d.rbf.head_w, d.rbf.rbf.neurons(), 1, rng);
      d.rbf.head_w0.fill(0.0);
      break;
    }
    case DiscKind::rbfc: {
      for (RbfCluster& cl : d.rbfc.clusters) {
        init_rbf_layer(cl.rbf, rng);
        fill_glorot(cl.w, cl.rbf.neurons(), 1, rng);
      }
      const double m = static_cast<double>(d.rbfc.cluster_count());
      d.rbfc.mix(0, 0) = 0.0;
      for (std::size_t z = 1; z < d.rbfc.mix.cols(); ++z) d.rbfc.mix(0, z) = 1.0 / m;
      break;
    }
  }
}

Matrix disc_raw(const Discriminator& d, const Matrix& batch, DiscCache* cache) {
  switch (d.kind) {
    case DiscKind::fcn:
      return stack_forward(d.fcn, batch, cache ? &cache->fcn : nullptr);
    case DiscKind::rbf:
      return rbf_forward(d.rbf.rbf, d.rbf.head_w0(0, 0), d.rbf.head_w, batch,
                         cache ? &cache->rbf : nullptr);
    case DiscKind::rbfc:
      return rbfc_forward(d.rbfc, batch, cache ? &cache->rbfc : nullptr);
  }
  throw ParameterError("unknown discriminator kind");
}

DiscGrads disc_backward(const Discriminator& d, const DiscCache& cache,
                        const Matrix& upstream) {
  DiscGrads out;
  switch (d.kind) {
    case DiscKind::fcn: {
      out.dinput = stack_backward(d.fcn, cache.fcn, upstream, &out.fcn);
      break;
    }
    case DiscKind::rbf: {
      out.rbf = rbf_backward(d.rbf.rbf, d.rbf.head_w, cache.rbf, upstream);
      out.rbf_dw0 = Matrix(1, 1);
      out.rbf_dw0(0, 0) = out.rbf.dw0;
      out.dinput = out.rbf.dinput;
      break;
    }
    case DiscKind::rbfc: {
      out.rbfc = rbfc_backward(d.rbfc, cache.rbfc, upstream);
      // Frozen mixing coefficients get exactly zero gradient; Adam with an
      // all-zero history then provably leaves them untouched. The bias stays
      // trainable either way.
      if (!d.train_mix)
        for (std::size_t z = 1; z < out.rbfc.dmix.cols(); ++z) out.rbfc.dmix(0, z) = 0.0;
      out.dinput = out.rbfc.dinput;
      break;
    }
  }
  return out;
}

std::vector<ParamRef> disc_params(Discriminator& d) {
  std::vector<ParamRef> out;
  switch (d.kind) {
    case DiscKind::fcn:
      return stack_params(d.fcn, "d");
    case DiscKind::rbf: {
      out.push_back({"d.rbf.centers", &d.rbf.rbf.centers, false});
      out.push_back({"d.rbf.widths", &d.rbf.rbf.widths, true});
      out.push_back({"d.head.w", &d.rbf.head_w, false});
      out.push_back({"d.head.w0", &d.rbf.head_w0, false});
      break;
    }
    case DiscKind::rbfc: {
      for (std::size_t z = 0; z < d.rbfc.clusters.size(); ++z) {
        const std::string base = "d.cluster" + std::to_string(z);
        out.push_back({base + ".centers", &d.rbfc.clusters[z].rbf.centers, false});
        out.push_back({base + ".widths", &d.rbfc.clusters[z].rbf.widths, true});
        out.push_back({base + ".w", &d.rbfc.clusters[z].w, false});
      }
      out.push_back({"d.mix", &d.rbfc.mix, false});
      break;
    }
  }
  return out;
}

std::vector<const Matrix*> disc_grad_refs(const Discriminator& d, DiscGrads& g) {
  std::vector<const Matrix*> out;
  switch (d.kind) {
    case DiscKind::fcn: {
      for (DenseGrads& dg : g.fcn) {
        out.push_back(&dg.dW);
        out.push_back(&dg.db);
      }
      break;
    }
    case DiscKind::rbf: {
      out.push_back(&g.rbf.dcenters);
      out.push_back(&g.rbf.dwidths);
      out.push_back(&g.rbf.dw);
      out.push_back(&g.rbf_dw0);
      break;
    }
    case DiscKind::rbfc: {
      for (RbfGrads& cg : g.rbfc.per_cluster) {
        out.push_back(&cg.dcenters);
        out.push_back(&cg.dwidths);
        out.push_back(&cg.dw);
      }
      out.push_back(&g.rbfc.dmix);
      break;
    }
  }
  return out;
}

void clamp_widths_floor(Matrix& widths) {
  for (std::size_t r = 0; r < widths.rows(); ++r)
    for (std::size_t c = 0; c < widths.cols(); ++c)
      if (widths(r, c) < kSigmaMin) widths(r, c) = kSigmaMin;
}

}  // namespace rbfgan
