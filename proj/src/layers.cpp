#include "rbfgan/layers.hpp"

#include <cmath>

#include "rbfgan/errors.hpp"

namespace rbfgan {

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::linear: return "linear";
  }
  return "?";
}

double logistic(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

double act_apply(Activation a, double x) {
  switch (a) {
    case Activation::relu: return x > 0.0 ? x : 0.0;
    case Activation::sigmoid: return logistic(x);
    case Activation::linear: return x;
  }
  return x;
}

// Derivative with respect to the pre-activation.
double act_deriv(Activation a, double pre) {
  switch (a) {
    case Activation::relu: return pre > 0.0 ? 1.0 : 0.0;
    case Activation::sigmoid: {
      const double s = logistic(pre);
      return s * (1.0 - s);
    }
    case Activation::linear: return 1.0;
  }
  return 1.0;
}

}  // namespace

Matrix dense_forward(const DenseLayer& layer, const Matrix& batch,
                     DenseCache* cache) {
  if (batch.cols() != layer.W.cols())
    throw DimensionError("dense_forward: batch " + batch.shape_str() +
                         " vs weights " + layer.W.shape_str());
  Matrix pre = matmul_nt(batch, layer.W);
  const std::size_t n = pre.rows(), q = pre.cols();
  for (std::size_t i = 0; i < n; ++i) {
    double* row = pre.row_ptr(i);
    const double* bias = layer.b.data();
    for (std::size_t j = 0; j < q; ++j) row[j] += bias[j];
  }
  Matrix out(n, q);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < q; ++j) out(i, j) = act_apply(layer.act, pre(i, j));
  if (cache) {
    cache->input = batch;
    cache->pre = std::move(pre);
  }
  return out;
}

DenseGrads dense_backward(const DenseLayer& layer, const DenseCache& cache,
                          const Matrix& upstream) {
  if (upstream.rows() != cache.pre.rows() || upstream.cols() != cache.pre.cols())
    throw DimensionError("dense_backward: upstream " + upstream.shape_str() +
                         " vs activations " + cache.pre.shape_str());
  const std::size_t n = upstream.rows(), q = upstream.cols();
  Matrix dpre(n, q);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < q; ++j)
      dpre(i, j) = upstream(i, j) * act_deriv(layer.act, cache.pre(i, j));

  DenseGrads g;
  g.dW = matmul_tn(dpre, cache.input);
  g.db = Matrix(1, q);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < q; ++j) g.db(0, j) += dpre(i, j);
  g.dinput = matmul(dpre, layer.W);
  return g;
}

DenseGrads dense_backward(const DenseLayer& layer, const Matrix& batch,
                          const Matrix& upstream) {
  DenseCache cache;
  dense_forward(layer, batch, &cache);
  return dense_backward(layer, cache, upstream);
}

void check_widths(const Matrix& widths) {
  for (std::size_t j = 0; j < widths.rows(); ++j) {
    const double s = widths(j, 0);
    if (!std::isfinite(s))
      throw NumericError("rbf widths: non-finite entry " + std::to_string(j));
    if (s < kSigmaMin)
      throw ParameterError("rbf widths: entry " + std::to_string(j) + " = " +
                           std::to_string(s) + " below the floor " +
                           std::to_string(kSigmaMin));
  }
}

Matrix rbf_forward(const RbfLayer& layer, double head_w0, const Matrix& head_w,
                   const Matrix& batch, RbfCache* cache) {
  const std::size_t n = batch.rows(), d = batch.cols(), q = layer.neurons();
  if (d != layer.input_dim())
    throw DimensionError("rbf_forward: batch " + batch.shape_str() +
                         " vs centers " + layer.centers.shape_str());
  if (head_w.rows() != q || head_w.cols() != 1)
    throw DimensionError("rbf_forward: head " + head_w.shape_str() +
                         " for " + std::to_string(q) + " neurons");
  if (layer.widths.rows() != q || layer.widths.cols() != 1)
    throw DimensionError("rbf_forward: widths " + layer.widths.shape_str() +
                         " for " + std::to_string(q) + " neurons");
  check_widths(layer.widths);
  batch.require_finite("rbf_forward batch");

  Matrix hidden(n, q), r2m(n, q), raw(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = batch.row_ptr(i);
    double acc = head_w0;
    for (std::size_t j = 0; j < q; ++j) {
      const double* v = layer.centers.row_ptr(j);
      double r2 = 0.0;
      for (std::size_t kd = 0; kd < d; ++kd) {
        const double diff = x[kd] - v[kd];
        r2 += diff * diff;
      }
      const double g = kernel_value_r2(layer.kernel, r2, layer.widths(j, 0));
      hidden(i, j) = g;
      r2m(i, j) = r2;
      acc += head_w(j, 0) * g;
    }
    raw(i, 0) = acc;
  }
  if (cache) {
    cache->input = batch;
    cache->hidden = std::move(hidden);
    cache->r2 = std::move(r2m);
  }
  return raw;
}

RbfGrads rbf_backward(const RbfLayer& layer, const Matrix& head_w,
                      const RbfCache& cache, const Matrix& upstream) {
  const std::size_t n = cache.input.rows(), d = cache.input.cols(),
                    q = layer.neurons();
  if (upstream.rows() != n || upstream.cols() != 1)
    throw DimensionError("rbf_backward: upstream " + upstream.shape_str() +
                         " for batch of " + std::to_string(n));

  RbfGrads g;
  g.dw = Matrix(q, 1);
  g.dcenters = Matrix(q, d);
  g.dwidths = Matrix(q, 1);
  g.dinput = Matrix(n, d);

  for (std::size_t i = 0; i < n; ++i) {
    const double u = upstream(i, 0);
    g.dw0 += u;
    if (u == 0.0) continue;
    const double* x = cache.input.row_ptr(i);
    double* dx = g.dinput.row_ptr(i);
    for (std::size_t j = 0; j < q; ++j) {
      const double sigma = layer.widths(j, 0);
      const double r2 = cache.r2(i, j);
      g.dw(j, 0) += u * cache.hidden(i, j);
      const double wj = head_w(j, 0);
      const double common = 2.0 * u * wj * kernel_dvalue_dr2(layer.kernel, r2, sigma);
      const double* v = layer.centers.row_ptr(j);
      double* dv = g.dcenters.row_ptr(j);
      for (std::size_t kd = 0; kd < d; ++kd) {
        const double spatial = common * (x[kd] - v[kd]);
        dx[kd] += spatial;
        dv[kd] -= spatial;
      }
      g.dwidths(j, 0) += u * wj * kernel_dvalue_dsigma(layer.kernel, r2, sigma);
    }
  }
  return g;
}

Matrix rbfc_forward(const RbfClusterLayer& layer, const Matrix& batch,
                    RbfcCache* cache) {
  const std::size_t m = layer.cluster_count();
  if (m == 0) throw ParameterError("rbfc_forward: no clusters");
  if (layer.mix.rows() != 1 || layer.mix.cols() != m + 1)
    throw DimensionError("rbfc_forward: mix " + layer.mix.shape_str() + " for " +
                         std::to_string(m) + " clusters");
  const std::size_t n = batch.rows();

  Matrix raw(n, 1, layer.mix(0, 0));
  Matrix cluster_out(n, m);
  if (cache) {
    cache->input = batch;
    cache->per_cluster.assign(m, RbfCache{});
    cache->cluster_out = Matrix();
  }
  for (std::size_t z = 0; z < m; ++z) {
    const RbfCluster& cl = layer.clusters[z];
    RbfCache local;
    Matrix part = rbf_forward(cl.rbf, 0.0, cl.w, batch, cache ? &local : nullptr);
    const double lambda = layer.mix(0, z + 1);
    for (std::size_t i = 0; i < n; ++i) {
      cluster_out(i, z) = part(i, 0);
      raw(i, 0) += lambda * part(i, 0);
    }
    if (cache) cache->per_cluster[z] = std::move(local);
  }
  if (cache) cache->cluster_out = std::move(cluster_out);
  return raw;
}

RbfcGrads rbfc_backward(const RbfClusterLayer& layer, const RbfcCache& cache,
                        const Matrix& upstream) {
  const std::size_t m = layer.cluster_count();
  const std::size_t n = cache.input.rows(), d = cache.input.cols();
  if (upstream.rows() != n || upstream.cols() != 1)
    throw DimensionError("rbfc_backward: upstream " + upstream.shape_str() +
                         " for batch of " + std::to_string(n));

  RbfcGrads g;
  g.dmix = Matrix(1, m + 1);
  g.dinput = Matrix(n, d);
  g.per_cluster.resize(m);

  for (std::size_t i = 0; i < n; ++i) g.dmix(0, 0) += upstream(i, 0);

  for (std::size_t z = 0; z < m; ++z) {
    const double lambda = layer.mix(0, z + 1);
    for (std::size_t i = 0; i < n; ++i)
      g.dmix(0, z + 1) += upstream(i, 0) * cache.cluster_out(i, z);

    // Everything below the mixing coefficient sees upstream scaled by it.
    Matrix scaled = scale(upstream, lambda);
    RbfGrads cg = rbf_backward(layer.clusters[z].rbf, layer.clusters[z].w,
                               cache.per_cluster[z], scaled);
    for (std::size_t i = 0; i < n; ++i) {
      const double* src = cg.dinput.row_ptr(i);
      double* dst = g.dinput.row_ptr(i);
      for (std::size_t kd = 0; kd < d; ++kd) dst[kd] += src[kd];
    }
    g.per_cluster[z] = std::move(cg);
  }
  return g;
}

}  // namespace rbfgan
