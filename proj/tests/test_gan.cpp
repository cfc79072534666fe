#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rbfgan/arch.hpp"
#include "rbfgan/checkpoint.hpp"
#include "rbfgan/errors.hpp"
#include "rbfgan/gan.hpp"
#include "rbfgan/layers.hpp"
#include "rbfgan/losses.hpp"
#include "rbfgan/matrix.hpp"
#include "rbfgan/network.hpp"
#include "rbfgan/rng.hpp"

using namespace rbfgan;

namespace {

std::string tmp_path(const std::string& stem) { return "gan_test_" + stem; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
}

NormStats unit_stats(std::size_t cols) {
  NormStats s;
  s.min.assign(cols, 0.0);
  s.max.assign(cols, 1.0);
  return s;
}

NormStats affine_stats(std::size_t cols, double lo, double hi) {
  NormStats s;
  s.min.assign(cols, lo);
  s.max.assign(cols, hi);
  return s;
}

Matrix squash_all(const Matrix& raw) {
  Matrix out(raw.rows(), raw.cols());
  for (std::size_t r = 0; r < raw.rows(); ++r)
    for (std::size_t c = 0; c < raw.cols(); ++c) out(r, c) = logistic(raw(r, c));
  return out;
}

double rel_err(double a, double b) {
  const double denom = std::max(1e-6, std::abs(a) + std::abs(b));
  return std::abs(a - b) / denom;
}

GanConfig small_config(GanMode mode, DiscKind kind) {
  GanConfig cfg;
  cfg.mode = mode;
  cfg.disc = kind;
  cfg.noise_dim = 3;
  cfg.lr = 1e-3;
  cfg.batch = 16;
  cfg.epochs = 3;
  cfg.seed = 5;
  cfg.g_arch = mode == GanMode::cgan ? "G(3,6*1,2)" : "G(3,6*1,4)";
  switch (kind) {
    case DiscKind::fcn: cfg.d_arch = "D(4,5*1,1)"; break;
    case DiscKind::rbf: cfg.d_arch = "D(4,7*1,1)"; break;
    case DiscKind::rbfc: cfg.d_arch = "D(4,(3,4),1)"; break;
  }
  return cfg;
}

}  // namespace

// ---------------------------------------------------------------------------
// Architecture grammar

TEST_CASE("architecture grammar parses the documented forms") {
  ArchSpec g = parse_architecture("G(62,128*2,4)");
  CHECK(g.role == 'G');
  CHECK(g.in == 62);
  CHECK(g.hidden == std::vector<std::size_t>{128, 128});
  CHECK(g.out == 4);
  CHECK_FALSE(g.is_cluster());

  ArchSpec spaced = parse_architecture(" G ( 62 , 128 * 2 , 4 ) ");
  CHECK(spaced.hidden == g.hidden);
  CHECK(spaced.in == g.in);
  CHECK(spaced.out == g.out);

  ArchSpec mixed = parse_architecture("G(10,64,32,2)");
  CHECK(mixed.hidden == std::vector<std::size_t>{64, 32});
  CHECK(mixed.out == 2);

  ArchSpec d = parse_architecture("D(4,64*1,1)");
  CHECK(d.role == 'D');
  CHECK(d.hidden == std::vector<std::size_t>{64});
  CHECK(d.out == 1);

  ArchSpec cl = parse_architecture("D(4,(42,43,43),1)");
  CHECK(cl.is_cluster());
  CHECK(cl.clusters == std::vector<std::size_t>{42, 43, 43});
  CHECK(cl.hidden.empty());
  CHECK(cl.out == 1);
}

TEST_CASE("architecture text round-trips through the canonical form") {
  CHECK(arch_to_string(parse_architecture("G(62,128*2,4)")) == "G(62,128,128,4)");
  CHECK(arch_to_string(parse_architecture("G(62,128,128,4)")) == "G(62,128,128,4)");
  CHECK(arch_to_string(parse_architecture("D(4,(42,43,43),1)")) == "D(4,(42,43,43),1)");

  ArchSpec a = parse_architecture("G(7,9*3,2)");
  ArchSpec b = parse_architecture(arch_to_string(a));
  CHECK(a.in == b.in);
  CHECK(a.out == b.out);
  CHECK(a.hidden == b.hidden);
}

TEST_CASE("architecture rejections carry the offending position") {
  CHECK_THROWS_AS(parse_architecture(""), ArchParseError);
  CHECK_THROWS_AS(parse_architecture("X(3,4,1)"), ArchParseError);
  CHECK_THROWS_AS(parse_architecture("G62"), ArchParseError);
  CHECK_THROWS_AS(parse_architecture("G(0,5,1)"), ArchParseError);
  CHECK_THROWS_AS(parse_architecture("G(3,5,1"), ArchParseError);
  CHECK_THROWS_AS(parse_architecture("G(3,5)"), ArchParseError);          // no hidden
  CHECK_THROWS_AS(parse_architecture("D(3,5,2)"), ArchParseError);        // D must end in 1
  CHECK_THROWS_AS(parse_architecture("G(3,(4,5),1)"), ArchParseError);    // clusters on G
  CHECK_THROWS_AS(parse_architecture("D(3,(4),1)"), ArchParseError);      // one cluster
  CHECK_THROWS_AS(parse_architecture("G(3,5*100,1)"), ArchParseError);    // repeat cap
  CHECK_THROWS_AS(parse_architecture("G(3,123456789,1)"), ArchParseError);
  CHECK_THROWS_AS(parse_architecture("G(3,5,1)x"), ArchParseError);

  try {
    parse_architecture("X(3,4,1)");
    FAIL("expected a parse error");
  } catch (const ArchParseError& e) {
    CHECK(e.position == 0);
  }
  try {
    parse_architecture("G(0,5,1)");
    FAIL("expected a parse error");
  } catch (const ArchParseError& e) {
    CHECK(e.position == 2);
    CHECK(std::string(e.what()).find("positive") != std::string::npos);
  }
}

// ---------------------------------------------------------------------------
// Dense stack assembly

TEST_CASE("dense stack wires the requested shapes") {
  DenseStack s = make_dense_stack(3, {5, 7}, 2, Activation::relu, Activation::linear);
  REQUIRE(s.layers.size() == 3);
  CHECK(s.layers[0].W.rows() == 5);
  CHECK(s.layers[0].W.cols() == 3);
  CHECK(s.layers[0].b.cols() == 5);
  CHECK(s.layers[0].act == Activation::relu);
  CHECK(s.layers[1].W.rows() == 7);
  CHECK(s.layers[1].W.cols() == 5);
  CHECK(s.layers[2].W.rows() == 2);
  CHECK(s.layers[2].W.cols() == 7);
  CHECK(s.layers[2].act == Activation::linear);
  CHECK(s.input_dim() == 3);
  CHECK(s.output_dim() == 2);

  std::vector<ParamRef> p = stack_params(s, "g");
  REQUIRE(p.size() == 6);
  CHECK(p[0].name == "g.layer0.W");
  CHECK(p[1].name == "g.layer0.b");
  CHECK(p[4].name == "g.layer2.W");
  CHECK_FALSE(p[0].is_width);

  CHECK_THROWS_AS(make_dense_stack(0, {5}, 2, Activation::relu, Activation::linear),
                  ParameterError);
  CHECK_THROWS_AS(make_dense_stack(3, {0}, 2, Activation::relu, Activation::linear),
                  ParameterError);
}

TEST_CASE("dense stack initialization is seed-deterministic") {
  DenseStack a = make_dense_stack(4, {6}, 2, Activation::relu, Activation::linear);
  DenseStack b = make_dense_stack(4, {6}, 2, Activation::relu, Activation::linear);
  SeededRng ra(123), rb(123), rc(124);
  init_dense_stack(a, ra);
  init_dense_stack(b, rb);
  CHECK(a.layers[0].W == b.layers[0].W);
  CHECK(a.layers[1].W == b.layers[1].W);
  CHECK(a.layers[0].b == b.layers[0].b);

  DenseStack c = make_dense_stack(4, {6}, 2, Activation::relu, Activation::linear);
  init_dense_stack(c, rc);
  CHECK_FALSE(a.layers[0].W == c.layers[0].W);

  // Glorot bound for fan_in 4, fan_out 6.
  const double limit = std::sqrt(6.0 / 10.0);
  for (std::size_t r = 0; r < a.layers[0].W.rows(); ++r)
    for (std::size_t cix = 0; cix < a.layers[0].W.cols(); ++cix)
      CHECK(std::abs(a.layers[0].W(r, cix)) <= limit);
  // Biases start at zero.
  for (std::size_t cix = 0; cix < a.layers[0].b.cols(); ++cix)
    CHECK(a.layers[0].b(0, cix) == 0.0);
}

TEST_CASE("stack forward matches a hand computation") {
  DenseStack s = make_dense_stack(2, {}, 2, Activation::relu, Activation::linear);
  s.layers[0].W = Matrix::from_rows({{2.0, 0.0}, {0.0, 3.0}});
  s.layers[0].b = Matrix::from_rows({{1.0, -1.0}});
  Matrix x = Matrix::from_rows({{1.0, 1.0}});
  Matrix y = stack_forward(s, x, nullptr);
  CHECK(y(0, 0) == 3.0);
  CHECK(y(0, 1) == 2.0);
}

// ---------------------------------------------------------------------------
// Full-pipeline gradient checks

TEST_CASE("generator gradients through every discriminator match finite differences") {
  const double eps = kDefaultClampEps;
  const double h = 1e-6;
  for (GanMode mode : {GanMode::gan, GanMode::cgan}) {
    for (DiscKind kind : {DiscKind::fcn, DiscKind::rbf, DiscKind::rbfc}) {
      CAPTURE(gan_mode_name(mode));
      CAPTURE(disc_kind_name(kind));
      GanConfig cfg = small_config(mode, kind);
      cfg.seed = 11;
      GanModel model = build_gan(cfg, 2, 2, unit_stats(4));
      const bool conditional = mode == GanMode::cgan;

      SeededRng rng(31);
      Matrix noise = rng_uniform(rng, 5, cfg.noise_dim);
      Matrix cond = rng_uniform(rng, 5, 2);

      auto objective = [&]() {
        Matrix g_in = conditional ? hcat(noise, cond) : noise;
        Matrix fake = stack_forward(model.generator, g_in, nullptr);
        Matrix d_in = conditional ? hcat(cond, fake) : fake;
        Matrix p = squash_all(disc_raw(model.disc, d_in, nullptr));
        return g_loss(p, eps);
      };

      // Analytic gradient of the generator objective via the full chain.
      std::vector<DenseCache> caches;
      Matrix g_in = conditional ? hcat(noise, cond) : noise;
      Matrix fake = stack_forward(model.generator, g_in, &caches);
      Matrix d_in = conditional ? hcat(cond, fake) : fake;
      DiscCache dcache;
      Matrix p = squash_all(disc_raw(model.disc, d_in, &dcache));
      DiscGrads through = disc_backward(model.disc, dcache, g_loss_grad_raw(p, eps));
      Matrix up_g = conditional ? slice_cols(through.dinput, 2, 4) : through.dinput;
      std::vector<DenseGrads> g_grads;
      stack_backward(model.generator, caches, up_g, &g_grads);

      std::vector<ParamRef> params = stack_params(model.generator, "g");
      double worst = 0.0;
      for (std::size_t pi = 0; pi < params.size(); ++pi) {
        Matrix& value = *params[pi].value;
        const Matrix& grad = pi % 2 == 0 ? g_grads[pi / 2].dW : g_grads[pi / 2].db;
        REQUIRE(grad.rows() == value.rows());
        REQUIRE(grad.cols() == value.cols());
        for (std::size_t r = 0; r < value.rows(); ++r) {
          for (std::size_t c = 0; c < value.cols(); ++c) {
            const double keep = value(r, c);
            value(r, c) = keep + h;
            const double up = objective();
            value(r, c) = keep - h;
            const double dn = objective();
            value(r, c) = keep;
            const double fd = (up - dn) / (2.0 * h);
            const double an = grad(r, c);
            if (std::abs(fd) < 1e-9 && std::abs(an) < 1e-9) continue;
            worst = std::max(worst, rel_err(an, fd));
          }
        }
      }
      CAPTURE(worst);
      CHECK(worst < 1e-3);
    }
  }
}

TEST_CASE("discriminator loss gradients match finite differences for every body") {
  const double eps = kDefaultClampEps;
  const double h = 1e-6;
  for (DiscKind kind : {DiscKind::fcn, DiscKind::rbf, DiscKind::rbfc}) {
    CAPTURE(disc_kind_name(kind));
    GanConfig cfg = small_config(GanMode::gan, kind);
    cfg.seed = 17;
    GanModel model = build_gan(cfg, 2, 2, unit_stats(4));

    // Initialization can clamp a width onto the positivity floor; central
    // differences need an open neighborhood, so lift widths clear of it.
    for (ParamRef& p : disc_params(model.disc))
      if (p.is_width)
        for (std::size_t r = 0; r < p.value->rows(); ++r)
          if ((*p.value)(r, 0) < 0.05) (*p.value)(r, 0) = 0.05;

    SeededRng rng(41);
    Matrix real = rng_uniform(rng, 6, 4);
    Matrix fake = rng_uniform(rng, 6, 4);

    auto objective = [&]() {
      Matrix pr = squash_all(disc_raw(model.disc, real, nullptr));
      Matrix pf = squash_all(disc_raw(model.disc, fake, nullptr));
      return d_loss(pr, pf, eps);
    };

    DiscCache cache_r, cache_f;
    Matrix pr = squash_all(disc_raw(model.disc, real, &cache_r));
    Matrix pf = squash_all(disc_raw(model.disc, fake, &cache_f));
    DiscGrads gr = disc_backward(model.disc, cache_r, d_loss_real_grad_raw(pr, eps));
    DiscGrads gf = disc_backward(model.disc, cache_f, d_loss_fake_grad_raw(pf, eps));
    std::vector<const Matrix*> refs_r = disc_grad_refs(model.disc, gr);
    std::vector<const Matrix*> refs_f = disc_grad_refs(model.disc, gf);

    std::vector<ParamRef> params = disc_params(model.disc);
    REQUIRE(params.size() == refs_r.size());
    double worst = 0.0;
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
      Matrix& value = *params[pi].value;
      CAPTURE(params[pi].name);
      for (std::size_t r = 0; r < value.rows(); ++r) {
        for (std::size_t c = 0; c < value.cols(); ++c) {
          const double keep = value(r, c);
          value(r, c) = keep + h;
          const double up = objective();
          value(r, c) = keep - h;
          const double dn = objective();
          value(r, c) = keep;
          const double fd = (up - dn) / (2.0 * h);
          const double an = (*refs_r[pi])(r, c) + (*refs_f[pi])(r, c);
          if (std::abs(fd) < 1e-9 && std::abs(an) < 1e-9) continue;
          worst = std::max(worst, rel_err(an, fd));
        }
      }
    }
    CAPTURE(worst);
    CHECK(worst < 1e-3);
  }
}

// ---------------------------------------------------------------------------
// Seed streams and determinism

TEST_CASE("seed streams are reproducible and pairwise distinct") {
  SeedStreams a = derive_streams(42);
  SeedStreams b = derive_streams(42);
  CHECK(a.init == b.init);
  CHECK(a.data == b.data);
  CHECK(a.noise == b.noise);
  CHECK(a.eval == b.eval);
  CHECK(a.init != a.data);
  CHECK(a.data != a.noise);
  CHECK(a.noise != a.eval);
  SeedStreams c = derive_streams(43);
  CHECK(a.init != c.init);
}

TEST_CASE("training is bitwise deterministic and evaluation noise is isolated") {
  SeededRng data_rng(900);
  Matrix train = rng_uniform(data_rng, 64, 3);
  Matrix val = rng_uniform(data_rng, 16, 3);

  GanConfig cfg;
  cfg.mode = GanMode::cgan;
  cfg.disc = DiscKind::rbf;
  cfg.g_arch = "G(3,6*1,1)";
  cfg.d_arch = "D(3,7*1,1)";
  cfg.noise_dim = 3;
  cfg.lr = 1e-3;
  cfg.batch = 16;
  cfg.epochs = 3;
  cfg.seed = 5;

  GanModel m1 = build_gan(cfg, 2, 1, unit_stats(3));
  GanModel m2 = build_gan(cfg, 2, 1, unit_stats(3));
  TrainingTrace t1 = train_gan(m1, train, val, nullptr);
  TrainingTrace t2 = train_gan(m2, train, val, nullptr);

  REQUIRE(t1.rows.size() == 3);
  REQUIRE(t2.rows.size() == 3);
  for (std::size_t i = 0; i < t1.rows.size(); ++i) {
    CHECK(t1.rows[i].epoch == i);
    CHECK(t1.rows[i].d_loss == t2.rows[i].d_loss);
    CHECK(t1.rows[i].g_loss == t2.rows[i].g_loss);
    CHECK(t1.rows[i].val_mse == t2.rows[i].val_mse);
  }
  for (std::size_t i = 0; i < m1.generator.layers.size(); ++i) {
    CHECK(m1.generator.layers[i].W == m2.generator.layers[i].W);
    CHECK(m1.generator.layers[i].b == m2.generator.layers[i].b);
  }
  CHECK(m1.disc.rbf.rbf.centers == m2.disc.rbf.rbf.centers);
  CHECK(m1.disc.rbf.rbf.widths == m2.disc.rbf.rbf.widths);
  CHECK(m1.disc.rbf.head_w == m2.disc.rbf.head_w);

  // More evaluation draws must not perturb the training stream: losses stay
  // identical, only the validation column may move.
  GanConfig cfg_k = cfg;
  cfg_k.eval_draws = 3;
  GanModel m3 = build_gan(cfg_k, 2, 1, unit_stats(3));
  TrainingTrace t3 = train_gan(m3, train, val, nullptr);
  for (std::size_t i = 0; i < t1.rows.size(); ++i) {
    CHECK(t3.rows[i].d_loss == t1.rows[i].d_loss);
    CHECK(t3.rows[i].g_loss == t1.rows[i].g_loss);
  }

  // The recorded validation score is exactly reproducible after the fact.
  double mse_again = validation_mse(m1, val, make_eval_noise(cfg, val.rows()), nullptr);
  CHECK(mse_again == t1.rows.back().val_mse);
}

TEST_CASE("plain-mode validation hands the evaluator denormalized rows") {
  GanConfig cfg = small_config(GanMode::gan, DiscKind::fcn);
  cfg.epochs = 1;
  NormStats stats = affine_stats(4, -1.0, 3.0);  // denorm: v*4 - 1
  GanModel model = build_gan(cfg, 2, 2, stats);

  Matrix seen;
  RowEvaluator capture_eval = [&](const Matrix& rows) {
    seen = rows;
    return 7.5;
  };
  std::vector<Matrix> noise = make_eval_noise(cfg, 8);
  SeededRng val_rng(1);
  Matrix val_rows = rng_uniform(val_rng, 8, 4);
  const double score = validation_mse(model, val_rows, noise, capture_eval);
  CHECK(score == 7.5);

  Matrix expect = denormalize_rows(stack_forward(model.generator, noise[0], nullptr), stats);
  CHECK(seen == expect);
}

// ---------------------------------------------------------------------------
// Toy distribution fit

TEST_CASE("a small gan recovers the mean of a 1-d normal sample") {
  SeededRng data_rng(2024);
  const std::size_t n = 512;
  Matrix all(n, 1);
  for (std::size_t i = 0; i < n; ++i) all(i, 0) = data_rng.next_normal();

  double lo = all(0, 0), hi = all(0, 0);
  for (std::size_t i = 0; i < n; ++i) {
    lo = std::min(lo, all(i, 0));
    hi = std::max(hi, all(i, 0));
  }
  NormStats stats;
  stats.min = {lo};
  stats.max = {hi};
  Matrix norm = normalize_rows(all, stats);

  Matrix train(448, 1), val(64, 1);
  for (std::size_t i = 0; i < 448; ++i) train(i, 0) = norm(i, 0);
  for (std::size_t i = 0; i < 64; ++i) val(i, 0) = norm(448 + i, 0);

  GanConfig cfg;
  cfg.mode = GanMode::gan;
  cfg.disc = DiscKind::fcn;
  cfg.g_arch = "G(8,16*1,1)";
  cfg.d_arch = "D(1,16*1,1)";
  cfg.noise_dim = 8;
  cfg.lr = 1e-3;
  cfg.batch = 64;
  cfg.epochs = 200;
  cfg.seed = 3;

  GanModel model = build_gan(cfg, 1, 0, stats);
  RowEvaluator mean_sq = [](const Matrix& rows) {
    double m = 0.0;
    for (std::size_t i = 0; i < rows.rows(); ++i) m += rows(i, 0);
    m /= static_cast<double>(rows.rows());
    return m * m;
  };
  TrainingTrace trace = train_gan(model, train, val, mean_sq);
  REQUIRE(trace.rows.size() == 200);

  SeededRng sample_rng(99);
  Matrix samples = generate_physical(model, sample_rng, 4000);
  double mean = 0.0;
  for (std::size_t i = 0; i < samples.rows(); ++i) mean += samples(i, 0);
  mean /= static_cast<double>(samples.rows());
  CAPTURE(mean);
  CHECK(std::abs(mean) <= 0.5);
}

// ---------------------------------------------------------------------------
// Regression baseline

TEST_CASE("the regression baseline fits a linear map") {
  SeededRng rng(7);
  const std::size_t n = 100;
  Matrix rows(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.next_uniform();
    rows(i, 0) = x;
    rows(i, 1) = x;  // y = x
  }
  NormStats stats = unit_stats(2);

  Matrix val(20, 2);
  for (std::size_t i = 0; i < 20; ++i) {
    const double x = static_cast<double>(i) / 19.0;
    val(i, 0) = x;
    val(i, 1) = x;
  }

  GanConfig cfg;
  cfg.g_arch = "G(1,16*1,1)";
  cfg.lr = 1e-2;
  cfg.batch = 16;
  cfg.epochs = 500;
  cfg.seed = 9;

  Regressor model = build_regressor(cfg, 1, 1, stats);
  TrainingTrace trace = train_regressor(model, rows, val);
  REQUIRE(trace.rows.size() == 500);
  CHECK(trace.rows.back().g_loss == 0.0);
  CAPTURE(trace.rows.back().val_mse);
  CHECK(trace.rows.back().val_mse < 1e-3);

  Matrix probe = Matrix::from_rows({{0.25}, {0.5}, {0.75}});
  Matrix pred = regressor_predict(model, probe);
  REQUIRE(pred.rows() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(std::abs(pred(i, 0) - probe(i, 0)) < 0.1);
}

TEST_CASE("zero training epochs leave the regressor untouched") {
  GanConfig cfg;
  cfg.g_arch = "G(2,4*1,1)";
  cfg.epochs = 0;
  cfg.seed = 21;
  Regressor a = build_regressor(cfg, 2, 1, unit_stats(3));
  Regressor b = build_regressor(cfg, 2, 1, unit_stats(3));

  SeededRng rng(3);
  Matrix rows = rng_uniform(rng, 12, 3);
  TrainingTrace trace = train_regressor(a, rows, rows);
  CHECK(trace.rows.empty());
  for (std::size_t i = 0; i < a.net.layers.size(); ++i) {
    CHECK(a.net.layers[i].W == b.net.layers[i].W);
    CHECK(a.net.layers[i].b == b.net.layers[i].b);
  }
}

TEST_CASE("regressor training is deterministic") {
  SeededRng rng(55);
  Matrix rows = rng_uniform(rng, 40, 3);
  Matrix val = rng_uniform(rng, 10, 3);
  GanConfig cfg;
  cfg.g_arch = "G(2,8*1,1)";
  cfg.lr = 5e-3;
  cfg.batch = 8;
  cfg.epochs = 20;
  cfg.seed = 13;
  Regressor a = build_regressor(cfg, 2, 1, unit_stats(3));
  Regressor b = build_regressor(cfg, 2, 1, unit_stats(3));
  TrainingTrace ta = train_regressor(a, rows, val);
  TrainingTrace tb = train_regressor(b, rows, val);
  REQUIRE(ta.rows.size() == tb.rows.size());
  for (std::size_t i = 0; i < ta.rows.size(); ++i) {
    CHECK(ta.rows[i].d_loss == tb.rows[i].d_loss);
    CHECK(ta.rows[i].val_mse == tb.rows[i].val_mse);
  }
}

// ---------------------------------------------------------------------------
// Sampling

TEST_CASE("a zeroed output layer makes the generator constant") {
  GanConfig cfg = small_config(GanMode::gan, DiscKind::fcn);
  NormStats stats = affine_stats(4, -1.0, 3.0);
  GanModel model = build_gan(cfg, 2, 2, stats);

  DenseLayer& head = model.generator.layers.back();
  head.W.fill(0.0);
  head.b = Matrix::from_rows({{0.1, 0.2, 0.3, 0.4}});

  SeededRng rng(5);
  Matrix rows = generate(model, rng, 7);
  REQUIRE(rows.rows() == 7);
  for (std::size_t r = 0; r < rows.rows(); ++r)
    for (std::size_t c = 0; c < rows.cols(); ++c)
      CHECK(rows(r, c) == head.b(0, c));

  SeededRng rng2(5);
  Matrix phys = generate_physical(model, rng2, 7);
  for (std::size_t r = 0; r < phys.rows(); ++r)
    for (std::size_t c = 0; c < phys.cols(); ++c)
      CHECK(phys(r, c) == doctest::Approx(head.b(0, c) * 4.0 - 1.0).epsilon(1e-12));
}

TEST_CASE("conditional generation averages draws and denormalizes") {
  GanConfig cfg;
  cfg.mode = GanMode::cgan;
  cfg.disc = DiscKind::fcn;
  cfg.g_arch = "G(4,8*1,9)";
  cfg.d_arch = "D(12,8*1,1)";
  cfg.noise_dim = 4;
  cfg.seed = 19;
  NormStats stats = affine_stats(12, -1.0, 2.0);
  GanModel model = build_gan(cfg, 3, 9, stats);

  SeededRng cond_rng(88);
  Matrix cond_phys(5, 3);
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t c = 0; c < 3; ++c)
      cond_phys(r, c) = -1.0 + 3.0 * cond_rng.next_uniform();

  SeededRng gen_rng(77);
  Matrix out = generate_conditional(model, gen_rng, cond_phys, 3);
  REQUIRE(out.rows() == 5);
  REQUIRE(out.cols() == 9);

  // Replicate by hand with the same stream: average normalized predictions
  // over the three draws, then denormalize the response block.
  SeededRng rng2(77);
  Matrix cond_norm = normalize_rows(cond_phys, stats_slice(stats, 0, 3));
  Matrix sum(5, 9);
  for (int k = 0; k < 3; ++k) {
    Matrix noise = rng_uniform(rng2, 5, 4);
    sum = add(sum, stack_forward(model.generator, hcat(noise, cond_norm), nullptr));
  }
  Matrix expect = denormalize_rows(scale(sum, 1.0 / 3.0), stats_slice(stats, 3, 12));
  CHECK(out == expect);

  CHECK_THROWS_AS(generate_conditional(model, gen_rng, cond_phys, 0), ParameterError);
  Matrix bad(5, 2);
  CHECK_THROWS_AS(generate_conditional(model, gen_rng, bad, 1), DimensionError);
  CHECK_THROWS_AS(generate(model, gen_rng, 4), ConfigError);

  GanModel plain = build_gan(small_config(GanMode::gan, DiscKind::fcn), 2, 2, unit_stats(4));
  SeededRng r3(1);
  CHECK_THROWS_AS(generate_conditional(plain, r3, cond_phys, 1), ConfigError);
}

// ---------------------------------------------------------------------------
// Builder validation

TEST_CASE("the builder rejects inconsistent widths and kinds") {
  NormStats s4 = unit_stats(4);

  GanConfig cfg = small_config(GanMode::gan, DiscKind::fcn);
  cfg.g_arch = "G(5,6*1,4)";  // input 5 vs noise_dim 3
  CHECK_THROWS_AS(build_gan(cfg, 2, 2, s4), ConfigError);

  cfg = small_config(GanMode::gan, DiscKind::fcn);
  cfg.g_arch = "G(3,6*1,3)";  // output must be the full row width 4
  CHECK_THROWS_AS(build_gan(cfg, 2, 2, s4), ConfigError);

  cfg = small_config(GanMode::cgan, DiscKind::fcn);
  cfg.g_arch = "G(3,6*1,4)";  // cgan output must be the response width 2
  CHECK_THROWS_AS(build_gan(cfg, 2, 2, s4), ConfigError);

  cfg = small_config(GanMode::gan, DiscKind::fcn);
  cfg.d_arch = "D(5,5*1,1)";  // discriminator input must be 4
  CHECK_THROWS_AS(build_gan(cfg, 2, 2, s4), ConfigError);

  cfg = small_config(GanMode::gan, DiscKind::rbf);
  cfg.d_arch = "D(4,5,5,1)";  // rbf body takes exactly one hidden group
  CHECK_THROWS_AS(build_gan(cfg, 2, 2, s4), ConfigError);

  cfg = small_config(GanMode::gan, DiscKind::rbfc);
  cfg.d_arch = "D(4,5*1,1)";  // rbfc needs the cluster form
  CHECK_THROWS_AS(build_gan(cfg, 2, 2, s4), ConfigError);

  cfg = small_config(GanMode::gan, DiscKind::fcn);
  cfg.d_arch = "D(4,(3,4),1)";  // cluster form needs the rbfc body
  CHECK_THROWS_AS(build_gan(cfg, 2, 2, s4), ConfigError);

  cfg = small_config(GanMode::cgan, DiscKind::fcn);
  CHECK_THROWS_AS(build_gan(cfg, 4, 0, s4), ConfigError);  // cgan with no responses

  cfg = small_config(GanMode::gan, DiscKind::fcn);
  cfg.g_arch = "D(3,6*1,4)";
  CHECK_THROWS_AS(build_gan(cfg, 2, 2, s4), ConfigError);

  cfg = small_config(GanMode::gan, DiscKind::fcn);
  CHECK_THROWS_AS(build_gan(cfg, 2, 2, unit_stats(3)), ConfigError);

  cfg = small_config(GanMode::gan, DiscKind::fcn);
  cfg.batch = 0;
  CHECK_THROWS_AS(validate_gan_config(cfg), ConfigError);
  cfg = small_config(GanMode::gan, DiscKind::fcn);
  cfg.d_steps = 0;
  CHECK_THROWS_AS(validate_gan_config(cfg), ConfigError);
  cfg = small_config(GanMode::gan, DiscKind::fcn);
  cfg.eval_draws = 0;
  CHECK_THROWS_AS(validate_gan_config(cfg), ConfigError);
  cfg = small_config(GanMode::gan, DiscKind::fcn);
  cfg.clamp_eps = 0.2;
  CHECK_THROWS_AS(validate_gan_config(cfg), ConfigError);
  cfg = small_config(GanMode::gan, DiscKind::fcn);
  cfg.lr = 0.0;
  CHECK_THROWS_AS(validate_gan_config(cfg), ConfigError);
}

TEST_CASE("discriminator kind names round-trip") {
  for (DiscKind k : {DiscKind::fcn, DiscKind::rbf, DiscKind::rbfc})
    CHECK(disc_kind_from_name(disc_kind_name(k)) == k);
  CHECK_THROWS_AS(disc_kind_from_name("mlp"), ConfigError);
  for (GanMode m : {GanMode::gan, GanMode::cgan})
    CHECK(gan_mode_from_name(gan_mode_name(m)) == m);
  CHECK_THROWS_AS(gan_mode_from_name("wgan"), ConfigError);
}

// ---------------------------------------------------------------------------
// Training safety rails

TEST_CASE("radial widths stay above the floor throughout training") {
  SeededRng rng(64);
  Matrix train = rng_uniform(rng, 32, 3);
  Matrix val = rng_uniform(rng, 8, 3);

  GanConfig cfg;
  cfg.mode = GanMode::cgan;
  cfg.disc = DiscKind::rbf;
  cfg.g_arch = "G(3,6*1,1)";
  cfg.d_arch = "D(3,9*1,1)";
  cfg.noise_dim = 3;
  cfg.lr = 0.5;  // aggressive on purpose: pushes widths into the clamp
  cfg.batch = 8;
  cfg.epochs = 5;
  cfg.seed = 2;

  GanModel model = build_gan(cfg, 2, 1, unit_stats(3));
  train_gan(model, train, val, nullptr);
  const Matrix& widths = model.disc.rbf.rbf.widths;
  for (std::size_t r = 0; r < widths.rows(); ++r)
    CHECK(widths(r, 0) >= kSigmaMin);
}

TEST_CASE("frozen mixing coefficients never move while the bias trains") {
  SeededRng rng(64);
  Matrix train = rng_uniform(rng, 32, 3);
  Matrix val = rng_uniform(rng, 8, 3);

  GanConfig cfg;
  cfg.mode = GanMode::cgan;
  cfg.disc = DiscKind::rbfc;
  cfg.g_arch = "G(3,6*1,1)";
  cfg.d_arch = "D(3,(3,4),1)";
  cfg.noise_dim = 3;
  cfg.lr = 0.05;
  cfg.batch = 8;
  cfg.epochs = 4;
  cfg.seed = 2;
  cfg.train_mix = false;

  GanModel frozen = build_gan(cfg, 2, 1, unit_stats(3));
  train_gan(frozen, train, val, nullptr);
  CHECK(frozen.disc.rbfc.mix(0, 1) == 0.5);
  CHECK(frozen.disc.rbfc.mix(0, 2) == 0.5);
  CHECK(frozen.disc.rbfc.mix(0, 0) != 0.0);  // the bias is not frozen

  cfg.train_mix = true;
  GanModel live = build_gan(cfg, 2, 1, unit_stats(3));
  train_gan(live, train, val, nullptr);
  CHECK(live.disc.rbfc.mix(0, 1) != 0.5);
}

TEST_CASE("divergent training aborts naming the epoch and batch") {
  SeededRng rng(12);
  Matrix train = rng_uniform(rng, 24, 4);
  Matrix val = rng_uniform(rng, 8, 4);

  GanConfig cfg = small_config(GanMode::cgan, DiscKind::fcn);
  cfg.g_arch = "G(3,6*1,2)";
  cfg.d_arch = "D(4,16*1,1)";
  cfg.lr = 1e308;  // a single update saturates the weights
  cfg.batch = 8;
  cfg.epochs = 3;

  GanModel model = build_gan(cfg, 2, 2, unit_stats(4));
  try {
    train_gan(model, train, val, nullptr);
    FAIL("expected training to abort");
  } catch (const NumericError& e) {
    const std::string msg = e.what();
    CAPTURE(msg);
    CHECK(msg.find("epoch ") != std::string::npos);
    CHECK(msg.find("batch ") != std::string::npos);
  }
}

// ---------------------------------------------------------------------------
// Trace CSV

TEST_CASE("training traces round-trip through csv byte for byte") {
  TrainingTrace trace;
  trace.rows.push_back({0, 1.0 / 3.0, -0.7, 0.25});
  trace.rows.push_back({1, 1.386294361119890618, std::log(0.5), 1e-9});
  trace.rows.push_back({5, 0.0, -0.0, 123456.789});

  const std::string path = tmp_path("trace.csv");
  trace_save_csv(path, trace);
  TrainingTrace back = trace_load_csv(path);
  REQUIRE(back.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.rows[i].epoch == trace.rows[i].epoch);
    CHECK(back.rows[i].d_loss == trace.rows[i].d_loss);
    CHECK(back.rows[i].g_loss == trace.rows[i].g_loss);
    CHECK(back.rows[i].val_mse == trace.rows[i].val_mse);
  }

  const std::string again = tmp_path("trace2.csv");
  trace_save_csv(again, back);
  CHECK(read_file(path) == read_file(again));

  std::vector<double> series = trace_val_series(trace);
  REQUIRE(series.size() == 3);
  CHECK(series[0] == 0.25);
  CHECK(series[2] == 123456.789);

  std::remove(path.c_str());
  std::remove(again.c_str());
}

TEST_CASE("trace csv rejects malformed input") {
  const std::string path = tmp_path("badtrace.csv");
  CHECK_THROWS_AS(trace_load_csv(tmp_path("missing-trace.csv")), IoError);

  write_file(path, "epoch,dl,gl,vm\n0,1,2,3\n");
  CHECK_THROWS_AS(trace_load_csv(path), CsvError);

  write_file(path, "epoch,d_loss,g_loss,val_mse\n0,1,2\n");
  CHECK_THROWS_AS(trace_load_csv(path), CsvError);

  write_file(path, "epoch,d_loss,g_loss,val_mse\nx,1,2,3\n");
  CHECK_THROWS_AS(trace_load_csv(path), CsvError);

  write_file(path, "epoch,d_loss,g_loss,val_mse\n1,1,2,3\n1,1,2,3\n");
  CHECK_THROWS_AS(trace_load_csv(path), CsvError);

  write_file(path, "epoch,d_loss,g_loss,val_mse\n0,1,junk,3\n");
  CHECK_THROWS_AS(trace_load_csv(path), CsvError);

  std::remove(path.c_str());
}

// ---------------------------------------------------------------------------
// Checkpoints

namespace {

GanModel trained_rbfc_model() {
  SeededRng rng(404);
  Matrix train = rng_uniform(rng, 32, 3);
  Matrix val = rng_uniform(rng, 8, 3);
  GanConfig cfg;
  cfg.mode = GanMode::cgan;
  cfg.disc = DiscKind::rbfc;
  cfg.g_arch = "G(3,5*1,1)";
  cfg.d_arch = "D(3,(3,4),1)";
  cfg.noise_dim = 3;
  cfg.lr = 1e-3;
  cfg.batch = 8;
  cfg.epochs = 2;
  cfg.seed = 31;
  GanModel model = build_gan(cfg, 2, 1, affine_stats(3, -2.0, 5.0));
  train_gan(model, train, val, nullptr);
  return model;
}

}  // namespace

TEST_CASE("checkpoints round-trip byte for byte and reproduce outputs") {
  GanModel model = trained_rbfc_model();
  const std::string a = tmp_path("ck_a.txt");
  const std::string b = tmp_path("ck_b.txt");

  checkpoint_save(a, model);
  GanModel loaded = checkpoint_load(a);
  checkpoint_save(b, loaded);
  CHECK(read_file(a) == read_file(b));

  CHECK(loaded.design_dim == model.design_dim);
  CHECK(loaded.response_dim == model.response_dim);
  CHECK(loaded.config.seed == model.config.seed);
  CHECK(loaded.config.d_arch == model.config.d_arch);
  CHECK(loaded.stats.min == model.stats.min);
  CHECK(loaded.stats.max == model.stats.max);

  SeededRng r1(7), r2(7);
  Matrix c1 = rng_uniform(r1, 6, 2);
  Matrix c2 = rng_uniform(r2, 6, 2);
  Matrix o1 = generate_conditional(model, r1, denormalize_rows(c1, stats_slice(model.stats, 0, 2)), 2);
  Matrix o2 = generate_conditional(loaded, r2, denormalize_rows(c2, stats_slice(loaded.stats, 0, 2)), 2);
  CHECK(o1 == o2);

  SeededRng b1(9), b2(9);
  Matrix batch = rng_uniform(b1, 5, 3);
  Matrix batch2 = rng_uniform(b2, 5, 3);
  CHECK(disc_raw(model.disc, batch, nullptr) == disc_raw(loaded.disc, batch2, nullptr));

  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("checkpoints round-trip for the dense and single-rbf bodies too") {
  for (DiscKind kind : {DiscKind::fcn, DiscKind::rbf}) {
    CAPTURE(disc_kind_name(kind));
    GanConfig cfg = small_config(GanMode::gan, kind);
    GanModel model = build_gan(cfg, 2, 2, unit_stats(4));
    const std::string a = tmp_path("ck_kind_a.txt");
    const std::string b = tmp_path("ck_kind_b.txt");
    checkpoint_save(a, model);
    GanModel loaded = checkpoint_load(a);
    checkpoint_save(b, loaded);
    CHECK(read_file(a) == read_file(b));
    std::remove(a.c_str());
    std::remove(b.c_str());
  }
}

TEST_CASE("checkpoint failure modes raise distinct errors") {
  GanModel model = trained_rbfc_model();
  const std::string good = tmp_path("ck_good.txt");
  checkpoint_save(good, model);
  const std::string text = read_file(good);
  const std::string bad = tmp_path("ck_bad.txt");

  // Future version.
  {
    std::string t = text;
    t.replace(0, std::string("RBFGAN-CKPT v1").size(), "RBFGAN-CKPT v2");
    write_file(bad, t);
    CHECK_THROWS_AS(checkpoint_load(bad), CheckpointVersionError);
  }
  // Not a checkpoint at all.
  {
    write_file(bad, "hello world\n");
    CHECK_THROWS_AS(checkpoint_load(bad), CheckpointFormatError);
  }
  // Truncation anywhere in the middle.
  {
    write_file(bad, text.substr(0, text.size() * 3 / 5));
    CHECK_THROWS_AS(checkpoint_load(bad), CheckpointFormatError);
  }
  // Missing end marker only.
  {
    std::string t = text.substr(0, text.size() - std::string("end\n").size());
    write_file(bad, t);
    CHECK_THROWS_AS(checkpoint_load(bad), CheckpointFormatError);
  }
  // Trailing junk.
  {
    write_file(bad, text + "extra\n");
    CHECK_THROWS_AS(checkpoint_load(bad), CheckpointFormatError);
  }
  // A parameter with tampered shape. The cgan generator input layer sees
  // noise (3) plus design (2) columns, so layer0.W is 5 x 5.
  {
    std::string t = text;
    const std::string needle = "param g.layer0.W 5 5";
    const std::size_t at = t.find(needle);
    REQUIRE(at != std::string::npos);
    t.replace(at, needle.size(), "param g.layer0.W 5 6");
    write_file(bad, t);
    CHECK_THROWS_AS(checkpoint_load(bad), CheckpointShapeError);
  }
  // An unknown parameter name.
  {
    std::string t = text;
    const std::string needle = "param g.layer0.W";
    const std::size_t at = t.find(needle);
    REQUIRE(at != std::string::npos);
    t.replace(at, needle.size(), "param g.layer9.W");
    write_file(bad, t);
    CHECK_THROWS_AS(checkpoint_load(bad), CheckpointFormatError);
  }
  // A missing config key.
  {
    std::string t = text;
    const std::size_t at = t.find("seed = ");
    REQUIRE(at != std::string::npos);
    const std::size_t eol = t.find('\n', at);
    t.erase(at, eol - at + 1);
    write_file(bad, t);
    CHECK_THROWS_AS(checkpoint_load(bad), CheckpointFormatError);
  }
  // Version error is not a shape or generic format confusion.
  {
    std::string t = text;
    t.replace(0, std::string("RBFGAN-CKPT v1").size(), "RBFGAN-CKPT v9");
    write_file(bad, t);
    bool version_error = false;
    try {
      checkpoint_load(bad);
    } catch (const CheckpointVersionError&) {
      version_error = true;
    } catch (const CheckpointError&) {
      version_error = false;
    }
    CHECK(version_error);
  }

  CHECK_THROWS_AS(checkpoint_load(tmp_path("ck_missing.txt")), IoError);

  std::remove(good.c_str());
  std::remove(bad.c_str());
}
