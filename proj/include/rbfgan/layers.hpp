#ifndef RBFGAN_LAYERS_HPP
#define RBFGAN_LAYERS_HPP

#include <vector>

#include "rbfgan/kernels.hpp"
#include "rbfgan/matrix.hpp"

namespace rbfgan {

enum class Activation { relu, sigmoid, linear };

const char* activation_name(Activation a);

// Numerically safe logistic: never overflows, output in (0,1).
double logistic(double x);

// ---------------------------------------------------------------------------
// Fully connected layer: out = act(batch * W^T + b).

struct DenseLayer {
  Matrix W;  // out x in
  Matrix b;  // 1 x out
  Activation act = Activation::linear;
};

struct DenseCache {
  Matrix input;  // n x in
  Matrix pre;    // n x out, pre-activation
};

Matrix dense_forward(const DenseLayer& layer, const Matrix& batch,
                     DenseCache* cache = nullptr);

struct DenseGrads {
  Matrix dW;      // out x in
  Matrix db;      // 1 x out
  Matrix dinput;  // n x in
};

// Backprop for one dense layer; upstream is dL/d(output), n x out.
DenseGrads dense_backward(const DenseLayer& layer, const DenseCache& cache,
                          const Matrix& upstream);
// Convenience overload that rebuilds the cache from the batch.
DenseGrads dense_backward(const DenseLayer& layer, const Matrix& batch,
                          const Matrix& upstream);

// ---------------------------------------------------------------------------
// Radial basis layer: q kernels over the input space, one shared kind.
// With a linear head (w0, w) the raw score of sample x_i is
//   raw_i = w0 + sum_j w_j g(x_i, v_j, sigma_j).

struct RbfLayer {
  Matrix centers;  // q x d
  Matrix widths;   // q x 1, every entry >= kSigmaMin
  KernelKind kernel = KernelKind::gaussian;

  std::size_t neurons() const { return centers.rows(); }
  std::size_t input_dim() const { return centers.cols(); }
};

// Raises ParameterError if any width sits below the floor.
void check_widths(const Matrix& widths);

struct RbfCache {
  Matrix input;   // n x d
  Matrix hidden;  // n x q kernel activations
  Matrix r2;      // n x q squared distances
};

// Returns raw scores (n x 1); hidden activations land in the cache.
Matrix rbf_forward(const RbfLayer& layer, double head_w0, const Matrix& head_w,
                   const Matrix& batch, RbfCache* cache = nullptr);

struct RbfGrads {
  double dw0 = 0.0;
  Matrix dw;        // q x 1
  Matrix dcenters;  // q x d
  Matrix dwidths;   // q x 1
  Matrix dinput;    // n x d
};

// upstream is dL/d(raw), n x 1. head_w is needed because center, width and
// input gradients all carry the head weight factor.
RbfGrads rbf_backward(const RbfLayer& layer, const Matrix& head_w,
                      const RbfCache& cache, const Matrix& upstream);

// ---------------------------------------------------------------------------
// Cluster-of-RBFs layer: m clusters, each with its own kernel kind, centers,
// widths and output weights, blended by mixing coefficients:
//   raw_i = mix_0 + sum_z mix_z * sum_j w_{z,j} g_z(x_i, v_{z,j}, sigma_{z,j})

struct RbfCluster {
  RbfLayer rbf;
  Matrix w;  // q_z x 1 output weights
};

struct RbfClusterLayer {
  std::vector<RbfCluster> clusters;
  Matrix mix;  // 1 x (m+1): bias followed by one coefficient per cluster

  std::size_t cluster_count() const { return clusters.size(); }
};

struct RbfcCache {
  Matrix input;
  std::vector<RbfCache> per_cluster;
  Matrix cluster_out;  // n x m, per-cluster sums before mixing
};

Matrix rbfc_forward(const RbfClusterLayer& layer, const Matrix& batch,
                    RbfcCache* cache = nullptr);

struct RbfcGrads {
  Matrix dmix;  // 1 x (m+1)
  std::vector<RbfGrads> per_cluster;  // dw0 unused, head lives in dmix
  Matrix dinput;
};

RbfcGrads rbfc_backward(const RbfClusterLayer& layer, const RbfcCache& cache,
                        const Matrix& upstream);

}  // namespace rbfgan

#endif  // RBFGAN_LAYERS_HPP
