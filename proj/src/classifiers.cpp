#include "casc/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "casc/rng.hpp"

namespace casc {

std::string_view to_string(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::ld: return "ld";
    case ClassifierKind::rf: return "rf";
    default: return "mlp";
  }
}

ClassifierKind classifier_kind_from_string(std::string_view s) {
  if (s == "ld") return ClassifierKind::ld;
  if (s == "rf") return ClassifierKind::rf;
  if (s == "mlp") return ClassifierKind::mlp;
  throw ParseError("unknown classifier kind: '" + std::string(s) + "'");
}

namespace detail {

// defined in random_forest.cpp
RfParams fit_random_forest(const Matrix& xs, std::span<const int> labels, std::uint64_t seed,
                           const HyperParams& hp);

}  // namespace detail

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void compute_standardizer(const Matrix& x, std::span<const std::size_t> rows,
                          std::vector<double>& mean, std::vector<double>& scale) {
  const std::size_t d = x.cols, n = rows.size();
  mean.assign(d, 0.0);
  scale.assign(d, 0.0);
  for (std::size_t r : rows) {
    const double* row = x.row(r);
    for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
  }
  for (std::size_t j = 0; j < d; ++j) mean[j] /= static_cast<double>(n);
  for (std::size_t r : rows) {
    const double* row = x.row(r);
    for (std::size_t j = 0; j < d; ++j) {
      double dev = row[j] - mean[j];
      scale[j] += dev * dev;
    }
  }
  for (std::size_t j = 0; j < d; ++j)
    scale[j] = std::sqrt(scale[j] / static_cast<double>(n));  // 0 marks constant feature
}

Matrix standardize(const Matrix& x, std::span<const std::size_t> rows,
                   std::span<const double> mean, std::span<const double> scale) {
  Matrix out(rows.size(), x.cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double* src = x.row(rows[i]);
    double* dst = out.row(i);
    for (std::size_t j = 0; j < x.cols; ++j)
      dst[j] = scale[j] == 0.0 ? 0.0 : (src[j] - mean[j]) / scale[j];
  }
  return out;
}

// Cholesky solve of (spd) a * w = b, in place on copies.
std::vector<double> solve_spd(std::vector<double> a, std::vector<double> b, std::size_t d) {
  for (std::size_t j = 0; j < d; ++j) {
    double diag = a[j * d + j];
    for (std::size_t k = 0; k < j; ++k) diag -= a[j * d + k] * a[j * d + k];
    if (diag <= 0.0) throw Error("pooled covariance is not positive definite");
    diag = std::sqrt(diag);
    a[j * d + j] = diag;
    for (std::size_t i = j + 1; i < d; ++i) {
      double v = a[i * d + j];
      for (std::size_t k = 0; k < j; ++k) v -= a[i * d + k] * a[j * d + k];
      a[i * d + j] = v / diag;
    }
  }
  for (std::size_t i = 0; i < d; ++i) {  // forward
    double v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= a[i * d + k] * b[k];
    b[i] = v / a[i * d + i];
  }
  for (std::size_t ii = d; ii > 0; --ii) {  // backward
    std::size_t i = ii - 1;
    double v = b[i];
    for (std::size_t k = i + 1; k < d; ++k) v -= a[k * d + i] * b[k];
    b[i] = v / a[i * d + i];
  }
  return b;
}

LdParams fit_ld(const Matrix& xs, std::span<const int> labels, const HyperParams& hp) {
  const std::size_t n = xs.rows, d = xs.cols;
  std::size_t n1 = 0;
  for (std::size_t i = 0; i < n; ++i) n1 += static_cast<std::size_t>(labels[i]);
  const std::size_t n0 = n - n1;
  std::vector<double> mu0(d, 0.0), mu1(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = xs.row(i);
    auto& mu = labels[i] ? mu1 : mu0;
    for (std::size_t j = 0; j < d; ++j) mu[j] += row[j];
  }
  for (std::size_t j = 0; j < d; ++j) {
    mu0[j] /= static_cast<double>(n0);
    mu1[j] /= static_cast<double>(n1);
  }
  std::vector<double> cov(d * d, 0.0), dev(d);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = xs.row(i);
    const auto& mu = labels[i] ? mu1 : mu0;
    for (std::size_t j = 0; j < d; ++j) dev[j] = row[j] - mu[j];
    for (std::size_t j = 0; j < d; ++j) {
      const double dj = dev[j];
      double* cr = cov.data() + j * d;
      for (std::size_t k = j; k < d; ++k) cr[k] += dj * dev[k];
    }
  }
  const double denom = static_cast<double>(n - 2);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j; k < d; ++k) {
      double v = cov[j * d + k] / denom;
      cov[j * d + k] = v;
      cov[k * d + j] = v;
    }
  for (std::size_t j = 0; j < d; ++j) cov[j * d + j] += hp.ld_ridge;

  std::vector<double> diff(d);
  for (std::size_t j = 0; j < d; ++j) diff[j] = mu1[j] - mu0[j];
  LdParams p;
  p.weights = solve_spd(std::move(cov), std::move(diff), d);
  double wm = 0.0;
  for (std::size_t j = 0; j < d; ++j) wm += p.weights[j] * (mu0[j] + mu1[j]);
  p.bias = -0.5 * wm +
           std::log(static_cast<double>(n1) / static_cast<double>(n0));
  return p;
}

MlpParams init_mlp(std::size_t d, const HyperParams& hp, Rng& rng) {
  MlpParams p;
  p.hidden = hp.mlp_hidden;
  const std::size_t h = static_cast<std::size_t>(hp.mlp_hidden);
  p.w1.resize(d * h);
  p.b1.assign(h, 0.0);
  p.w2.resize(h);
  const double lim1 = std::sqrt(6.0 / static_cast<double>(d + h));
  for (auto& w : p.w1) w = (2.0 * rng.uniform() - 1.0) * lim1;
  const double lim2 = std::sqrt(6.0 / static_cast<double>(h + 1));
  for (auto& w : p.w2) w = (2.0 * rng.uniform() - 1.0) * lim2;
  p.b2 = 0.0;
  return p;
}

MlpParams fit_mlp(const Matrix& xs, std::span<const int> labels, std::uint64_t seed,
                  const HyperParams& hp) {
  Rng rng(derive_seed(seed, hash_tag("mlp-init")));
  MlpParams p = init_mlp(xs.cols, hp, rng);
  std::vector<std::size_t> all(xs.rows);
  std::iota(all.begin(), all.end(), 0);
  MlpParams grad;
  for (int epoch = 0; epoch < hp.mlp_epochs; ++epoch) {
    mlp_loss_and_grad(p, xs, labels, all, &grad);
    const double lr = hp.mlp_lr;
    for (std::size_t i = 0; i < p.w1.size(); ++i) p.w1[i] -= lr * grad.w1[i];
    for (std::size_t i = 0; i < p.b1.size(); ++i) p.b1[i] -= lr * grad.b1[i];
    for (std::size_t i = 0; i < p.w2.size(); ++i) p.w2[i] -= lr * grad.w2[i];
    p.b2 -= lr * grad.b2;
  }
  return p;
}

}  // namespace

double mlp_loss_and_grad(const MlpParams& p, const Matrix& x, std::span<const int> labels,
                         std::span<const std::size_t> rows, MlpParams* grad) {
  const std::size_t n = rows.size(), d = x.cols;
  const std::size_t h = static_cast<std::size_t>(p.hidden);
  if (grad) {
    grad->hidden = p.hidden;
    grad->w1.assign(d * h, 0.0);
    grad->b1.assign(h, 0.0);
    grad->w2.assign(h, 0.0);
    grad->b2 = 0.0;
  }
  std::vector<double> hidden(h);
  double loss = 0.0;
  std::vector<double> dz(h);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = x.row(rows[i]);
    std::copy(p.b1.begin(), p.b1.end(), hidden.begin());
    for (std::size_t k = 0; k < d; ++k) {
      const double xv = row[k];
      if (xv == 0.0) continue;
      const double* w = p.w1.data() + k * h;
      for (std::size_t j = 0; j < h; ++j) hidden[j] += xv * w[j];
    }
    double logit = p.b2;
    for (std::size_t j = 0; j < h; ++j)
      if (hidden[j] > 0.0) logit += hidden[j] * p.w2[j];
    const double prob = sigmoid(logit);
    const double y = static_cast<double>(labels[rows[i]]);
    const double safe = std::clamp(prob, 1e-15, 1.0 - 1e-15);
    loss -= y * std::log(safe) + (1.0 - y) * std::log(1.0 - safe);
    if (!grad) continue;
    const double dlogit = (prob - y) / static_cast<double>(n);
    grad->b2 += dlogit;
    for (std::size_t j = 0; j < h; ++j) {
      const bool active = hidden[j] > 0.0;
      if (active) grad->w2[j] += hidden[j] * dlogit;
      dz[j] = active ? p.w2[j] * dlogit : 0.0;
      grad->b1[j] += dz[j];
    }
    for (std::size_t k = 0; k < d; ++k) {
      const double xv = row[k];
      if (xv == 0.0) continue;
      double* gw = grad->w1.data() + k * h;
      for (std::size_t j = 0; j < h; ++j) gw[j] += xv * dz[j];
    }
  }
  return loss / static_cast<double>(n);
}

TrainedModel fit(ClassifierKind kind, FeatureSchema schema, const Matrix& x,
                 std::span<const int> labels, std::span<const std::size_t> rows,
                 std::uint64_t seed, const HyperParams& hp) {
  if (labels.size() != x.rows)
    throw LengthMismatchError("labels/rows size mismatch in fit");
  std::size_t per_class[2] = {0, 0};
  for (std::size_t r : rows) ++per_class[labels[r] ? 1 : 0];
  if (per_class[0] == 0 || per_class[1] == 0)
    throw SingleClassError("training data contains a single class");
  if (per_class[0] < 2 || per_class[1] < 2)
    throw TooFewSamplesError("need at least 2 rows per class to fit");

  TrainedModel model;
  model.kind = kind;
  model.schema = schema;
  compute_standardizer(x, rows, model.feat_mean, model.feat_scale);
  Matrix xs = standardize(x, rows, model.feat_mean, model.feat_scale);
  std::vector<int> y;
  y.reserve(rows.size());
  for (std::size_t r : rows) y.push_back(labels[r]);

  switch (kind) {
    case ClassifierKind::ld:
      model.params = fit_ld(xs, y, hp);
      break;
    case ClassifierKind::rf:
      model.params = detail::fit_random_forest(xs, y, seed, hp);
      break;
    case ClassifierKind::mlp:
      model.params = fit_mlp(xs, y, seed, hp);
      break;
  }
  return model;
}

namespace {

double predict_one(const TrainedModel& model, const double* z) {
  if (const auto* ld = std::get_if<LdParams>(&model.params)) {
    double logit = ld->bias;
    for (std::size_t j = 0; j < ld->weights.size(); ++j) logit += ld->weights[j] * z[j];
    return sigmoid(logit);
  }
  if (const auto* rf = std::get_if<RfParams>(&model.params)) {
    int votes = 0;
    for (const auto& tree : rf->trees) {
      std::int32_t node = 0;
      while (tree.nodes[node].feature >= 0) {
        const auto& nd = tree.nodes[node];
        node = z[nd.feature] <= nd.threshold ? nd.left : nd.right;
      }
      votes += tree.nodes[node].left;
    }
    return static_cast<double>(votes) / static_cast<double>(rf->trees.size());
  }
  const auto& mlp = std::get<MlpParams>(model.params);
  const std::size_t h = static_cast<std::size_t>(mlp.hidden);
  const std::size_t d = mlp.w1.size() / h;
  double logit = mlp.b2;
  for (std::size_t j = 0; j < h; ++j) {
    double zj = mlp.b1[j];
    for (std::size_t k = 0; k < d; ++k) zj += z[k] * mlp.w1[k * h + j];
    if (zj > 0.0) logit += zj * mlp.w2[j];
  }
  return sigmoid(logit);
}

}  // namespace

std::vector<double> predict_proba(const TrainedModel& model, const Matrix& x,
                                  std::span<const std::size_t> rows) {
  const std::size_t d = model.feat_mean.size();
  if (x.cols != d)
    throw SchemaMismatchError("model expects " + std::to_string(d) + " features, got " +
                              std::to_string(x.cols));
  std::vector<double> out;
  out.reserve(rows.size());
  std::vector<double> z(d);
  for (std::size_t r : rows) {
    const double* src = x.row(r);
    for (std::size_t j = 0; j < d; ++j)
      z[j] = model.feat_scale[j] == 0.0 ? 0.0
                                        : (src[j] - model.feat_mean[j]) / model.feat_scale[j];
    out.push_back(predict_one(model, z.data()));
  }
  return out;
}

std::vector<double> predict_proba(const TrainedModel& model, const Matrix& x) {
  std::vector<std::size_t> all(x.rows);
  std::iota(all.begin(), all.end(), 0);
  return predict_proba(model, x, all);
}

TrainedModel fit(ClassifierKind kind, std::span<const FeatureVector> rows,
                 std::span<const Label> labels, std::uint64_t seed, const HyperParams& hp) {
  if (rows.empty()) throw TooFewSamplesError("no training rows");
  if (rows.size() != labels.size()) throw LengthMismatchError("rows/labels size mismatch");
  const FeatureSchema schema = rows[0].schema;
  Matrix x(rows.size(), feature_count(schema));
  std::vector<int> y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].schema != schema)
      throw SchemaMismatchError("mixed feature schemas in training data");
    check_feature_vector(rows[i]);
    std::copy(rows[i].values.begin(), rows[i].values.end(), x.row(i));
    y[i] = labels[i] == Label::conspiracy ? 1 : 0;
  }
  std::vector<std::size_t> all(rows.size());
  std::iota(all.begin(), all.end(), 0);
  return fit(kind, schema, x, y, all, seed, hp);
}

std::vector<double> predict_proba(const TrainedModel& model,
                                  std::span<const FeatureVector> rows) {
  Matrix x(rows.size(), model.feat_mean.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].schema != model.schema)
      throw SchemaMismatchError("feature vector schema does not match the model");
    check_feature_vector(rows[i]);
    std::copy(rows[i].values.begin(), rows[i].values.end(), x.row(i));
  }
  return predict_proba(model, x);
}

namespace {

constexpr char kMagic[8] = {'C', 'A', 'S', 'C', 'M', 'L', '0', '1'};

template <typename T>
void put(std::vector<std::uint8_t>& buf, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::size_t at = buf.size();
  buf.resize(at + sizeof(T));
  std::memcpy(buf.data() + at, &v, sizeof(T));
}

template <typename T>
T take(std::span<const std::uint8_t>& bytes) {
  if (bytes.size() < sizeof(T)) throw ParseError("truncated model file");
  T v;
  std::memcpy(&v, bytes.data(), sizeof(T));
  bytes = bytes.subspan(sizeof(T));
  return v;
}

void put_doubles(std::vector<std::uint8_t>& buf, std::span<const double> v) {
  put<std::uint64_t>(buf, v.size());
  for (double d : v) put(buf, d);
}

std::vector<double> take_doubles(std::span<const std::uint8_t>& bytes) {
  auto n = take<std::uint64_t>(bytes);
  std::vector<double> v(n);
  for (auto& d : v) d = take<double>(bytes);
  return v;
}

}  // namespace

std::vector<std::uint8_t> serialize_model(const TrainedModel& model) {
  std::vector<std::uint8_t> buf;
  buf.insert(buf.end(), kMagic, kMagic + 8);
  put<std::uint8_t>(buf, static_cast<std::uint8_t>(model.kind));
  put<std::uint8_t>(buf, static_cast<std::uint8_t>(model.schema));
  put_doubles(buf, model.feat_mean);
  put_doubles(buf, model.feat_scale);
  if (const auto* ld = std::get_if<LdParams>(&model.params)) {
    put_doubles(buf, ld->weights);
    put(buf, ld->bias);
  } else if (const auto* rf = std::get_if<RfParams>(&model.params)) {
    put<std::uint64_t>(buf, rf->trees.size());
    for (const auto& tree : rf->trees) {
      put<std::uint64_t>(buf, tree.nodes.size());
      for (const auto& nd : tree.nodes) {
        put(buf, nd.feature);
        put(buf, nd.threshold);
        put(buf, nd.left);
        put(buf, nd.right);
      }
    }
  } else {
    const auto& mlp = std::get<MlpParams>(model.params);
    put<std::int32_t>(buf, mlp.hidden);
    put_doubles(buf, mlp.w1);
    put_doubles(buf, mlp.b1);
    put_doubles(buf, mlp.w2);
    put(buf, mlp.b2);
  }
  return buf;
}

TrainedModel deserialize_model(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 8) != 0)
    throw ParseError("not a model file (bad magic)");
  bytes = bytes.subspan(8);
  TrainedModel model;
  model.kind = static_cast<ClassifierKind>(take<std::uint8_t>(bytes));
  model.schema = static_cast<FeatureSchema>(take<std::uint8_t>(bytes));
  model.feat_mean = take_doubles(bytes);
  model.feat_scale = take_doubles(bytes);
  switch (model.kind) {
    case ClassifierKind::ld: {
      LdParams ld;
      ld.weights = take_doubles(bytes);
      ld.bias = take<double>(bytes);
      model.params = std::move(ld);
      break;
    }
    case ClassifierKind::rf: {
      RfParams rf;
      rf.trees.resize(take<std::uint64_t>(bytes));
      for (auto& tree : rf.trees) {
        tree.nodes.resize(take<std::uint64_t>(bytes));
        for (auto& nd : tree.nodes) {
          nd.feature = take<std::int32_t>(bytes);
          nd.threshold = take<double>(bytes);
          nd.left = take<std::int32_t>(bytes);
          nd.right = take<std::int32_t>(bytes);
        }
      }
      model.params = std::move(rf);
      break;
    }
    case ClassifierKind::mlp: {
      MlpParams mlp;
      mlp.hidden = take<std::int32_t>(bytes);
      mlp.w1 = take_doubles(bytes);
      mlp.b1 = take_doubles(bytes);
      mlp.w2 = take_doubles(bytes);
      mlp.b2 = take<double>(bytes);
      model.params = std::move(mlp);
      break;
    }
    default:
      throw ParseError("unknown classifier kind in model file");
  }
  return model;
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  auto bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize_model(bytes);
}

}  // namespace casc
