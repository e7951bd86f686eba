#include "tracklab/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tracklab/rng.hpp"

namespace tracklab {

namespace {

void check_sizes(const std::vector<int>& layer_sizes) {
  if (layer_sizes.size() < 2) {
    throw std::invalid_argument("mlp: need at least input and output layers");
  }
  for (int n : layer_sizes) {
    if (n <= 0) throw std::invalid_argument("mlp: layer sizes must be positive");
  }
}

MlpNet allocate(const std::vector<int>& layer_sizes) {
  check_sizes(layer_sizes);
  MlpNet net;
  net.layer_sizes = layer_sizes;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    net.weights.emplace_back(static_cast<std::size_t>(layer_sizes[l + 1]) *
                             static_cast<std::size_t>(layer_sizes[l]));
    net.biases.emplace_back(static_cast<std::size_t>(layer_sizes[l + 1]));
  }
  return net;
}

// Forward pass keeping every layer's activation: activations[0] = x,
// activations.back() = linear output. Hidden layers use tanh.
std::vector<std::vector<double>> forward_trace(const MlpNet& net, std::span<const double> x) {
  if (static_cast<int>(x.size()) != net.input_size()) {
    throw std::domain_error("mlp: input size mismatch");
  }
  std::vector<std::vector<double>> activations;
  activations.emplace_back(x.begin(), x.end());
  const std::size_t layers = net.weights.size();
  for (std::size_t l = 0; l < layers; ++l) {
    const int n_in = net.layer_sizes[l];
    const int n_out = net.layer_sizes[l + 1];
    const auto& prev = activations.back();
    std::vector<double> next(static_cast<std::size_t>(n_out));
    for (int i = 0; i < n_out; ++i) {
      double acc = net.biases[l][static_cast<std::size_t>(i)];
      const double* row = net.weights[l].data() + static_cast<std::size_t>(i) * n_in;
      for (int j = 0; j < n_in; ++j) acc += row[j] * prev[static_cast<std::size_t>(j)];
      next[static_cast<std::size_t>(i)] = (l + 1 == layers) ? acc : std::tanh(acc);
    }
    activations.push_back(std::move(next));
  }
  return activations;
}

}  // namespace

MlpNet zero_mlp(const std::vector<int>& layer_sizes) { return allocate(layer_sizes); }

MlpNet random_mlp(const std::vector<int>& layer_sizes, std::uint64_t seed, double weight_scale) {
  MlpNet net = allocate(layer_sizes);
  Rng rng(seed);
  for (auto& layer : net.weights) {
    for (double& w : layer) w = rng.uniform(-weight_scale, weight_scale);
  }
  return net;
}

std::vector<double> mlp_forward(const MlpNet& net, std::span<const double> x) {
  return forward_trace(net, x).back();
}

MlpGrads mlp_gradient(const MlpNet& net, std::span<const double> x,
                      std::span<const double> output_error) {
  if (static_cast<int>(output_error.size()) != net.output_size()) {
    throw std::domain_error("mlp: output error size mismatch");
  }
  const auto activations = forward_trace(net, x);

  MlpGrads grads;
  grads.weights.resize(net.weights.size());
  grads.biases.resize(net.biases.size());

  // delta = d(dot(output, output_error))/d(pre-activation), walked backwards.
  std::vector<double> delta(output_error.begin(), output_error.end());
  for (std::size_t l = net.weights.size(); l-- > 0;) {
    const int n_in = net.layer_sizes[l];
    const int n_out = net.layer_sizes[l + 1];
    const auto& input = activations[l];

    grads.biases[l] = delta;
    grads.weights[l].resize(net.weights[l].size());
    for (int i = 0; i < n_out; ++i) {
      double* row = grads.weights[l].data() + static_cast<std::size_t>(i) * n_in;
      const double di = delta[static_cast<std::size_t>(i)];
      for (int j = 0; j < n_in; ++j) row[j] = di * input[static_cast<std::size_t>(j)];
    }

    if (l == 0) break;
    std::vector<double> prev_delta(static_cast<std::size_t>(n_in), 0.0);
    for (int i = 0; i < n_out; ++i) {
      const double di = delta[static_cast<std::size_t>(i)];
      const double* row = net.weights[l].data() + static_cast<std::size_t>(i) * n_in;
      for (int j = 0; j < n_in; ++j) prev_delta[static_cast<std::size_t>(j)] += di * row[j];
    }
    // input[j] = tanh(z_j) for hidden layers, so dtanh/dz = 1 - a^2.
    for (int j = 0; j < n_in; ++j) {
      const double a = input[static_cast<std::size_t>(j)];
      prev_delta[static_cast<std::size_t>(j)] *= 1.0 - a * a;
    }
    delta = std::move(prev_delta);
  }
  return grads;
}

MlpNet sgd_update(MlpNet net, const MlpGrads& grads, double learning_rate) {
  if (grads.weights.size() != net.weights.size() || grads.biases.size() != net.biases.size()) {
    throw std::domain_error("mlp: gradient shape mismatch");
  }
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    if (grads.weights[l].size() != net.weights[l].size() ||
        grads.biases[l].size() != net.biases[l].size()) {
      throw std::domain_error("mlp: gradient shape mismatch");
    }
    for (std::size_t i = 0; i < net.weights[l].size(); ++i) {
      net.weights[l][i] += learning_rate * grads.weights[l][i];
    }
    for (std::size_t i = 0; i < net.biases[l].size(); ++i) {
      net.biases[l][i] += learning_rate * grads.biases[l][i];
    }
  }
  return net;
}

double grad_check(const MlpNet& net, std::span<const double> x,
                  std::span<const double> output_error, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("grad_check: eps must be > 0");
  const auto analytic = mlp_gradient(net, x, output_error);

  const auto objective = [&](const MlpNet& candidate) {
    const auto out = mlp_forward(candidate, x);
    double acc = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) acc += out[i] * output_error[i];
    return acc;
  };

  double worst = 0.0;
  const auto compare = [&](double a, double fd) {
    const double denom = std::max({1.0, std::abs(a), std::abs(fd)});
    worst = std::max(worst, std::abs(a - fd) / denom);
  };

  MlpNet probe = net;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    for (std::size_t i = 0; i < net.weights[l].size(); ++i) {
      const double saved = probe.weights[l][i];
      probe.weights[l][i] = saved + eps;
      const double hi = objective(probe);
      probe.weights[l][i] = saved - eps;
      const double lo = objective(probe);
      probe.weights[l][i] = saved;
      compare(analytic.weights[l][i], (hi - lo) / (2.0 * eps));
    }
    for (std::size_t i = 0; i < net.biases[l].size(); ++i) {
      const double saved = probe.biases[l][i];
      probe.biases[l][i] = saved + eps;
      const double hi = objective(probe);
      probe.biases[l][i] = saved - eps;
      const double lo = objective(probe);
      probe.biases[l][i] = saved;
      compare(analytic.biases[l][i], (hi - lo) / (2.0 * eps));
    }
  }
  return worst;
}

namespace {

void write_row(std::ostream& out, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out << ',';
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
    out << buf;
  }
  out << '\n';
}

std::vector<double> parse_row(const std::string& line) {
  std::vector<double> values;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    values.push_back(std::stod(cell));
  }
  return values;
}

}  // namespace

void save_weights(const MlpNet& net, std::ostream& out) {
  for (std::size_t i = 0; i < net.layer_sizes.size(); ++i) {
    if (i > 0) out << ',';
    out << net.layer_sizes[i];
  }
  out << '\n';
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    write_row(out, net.weights[l]);
    write_row(out, net.biases[l]);
  }
}

void save_weights(const MlpNet& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  save_weights(net, out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

MlpNet load_weights(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("weight file: missing header");
  std::vector<int> sizes;
  for (double v : parse_row(line)) sizes.push_back(static_cast<int>(v));
  MlpNet net = allocate(sizes);
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    if (!std::getline(in, line)) throw std::runtime_error("weight file: truncated");
    auto w = parse_row(line);
    if (w.size() != net.weights[l].size()) {
      throw std::runtime_error("weight file: wrong weight count in layer " + std::to_string(l));
    }
    net.weights[l] = std::move(w);
    if (!std::getline(in, line)) throw std::runtime_error("weight file: truncated");
    auto b = parse_row(line);
    if (b.size() != net.biases[l].size()) {
      throw std::runtime_error("weight file: wrong bias count in layer " + std::to_string(l));
    }
    net.biases[l] = std::move(b);
  }
  return net;
}

MlpNet load_weights(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  return load_weights(in);
}

}  // namespace tracklab
