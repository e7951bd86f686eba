#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace tracklab {

/// Fully connected net with tanh hidden units and a linear output layer.
/// weights[l] is row-major, layer_sizes[l+1] x layer_sizes[l].
struct MlpNet {
  std::vector<int> layer_sizes;
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;

  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
};

/// All parameters zero. Throws std::invalid_argument on fewer than two
/// layers or a nonpositive size.
MlpNet zero_mlp(const std::vector<int>& layer_sizes);

/// Weights uniform in [-weight_scale, weight_scale] from a seeded
/// generator, biases zero.
MlpNet random_mlp(const std::vector<int>& layer_sizes, std::uint64_t seed,
                  double weight_scale = 0.1);

/// Throws std::domain_error if x.size() != input size.
std::vector<double> mlp_forward(const MlpNet& net, std::span<const double> x);

/// Same shapes as the net it was computed from.
struct MlpGrads {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
};

/// Gradients of dot(output, output_error) wrt every parameter, i.e.
/// backprop seeded with output_error at the output layer.
/// Throws std::domain_error on size mismatch.
MlpGrads mlp_gradient(const MlpNet& net, std::span<const double> x,
                      std::span<const double> output_error);

/// params += learning_rate * grads. Ascent along the seeded direction;
/// feedback-error learning seeds with the feedback command, so ascent
/// moves the net output toward absorbing it. Throws std::domain_error
/// on shape mismatch.
MlpNet sgd_update(MlpNet net, const MlpGrads& grads, double learning_rate);

/// Max deviation between mlp_gradient and central finite differences of
/// dot(output, output_error), measured per parameter as
/// |a - fd| / max(1, |a|, |fd|). Requires eps > 0.
double grad_check(const MlpNet& net, std::span<const double> x,
                  std::span<const double> output_error, double eps);

/// Flat CSV snapshot: layer sizes on the first line, then per layer one
/// line of row-major weights and one line of biases.
void save_weights(const MlpNet& net, std::ostream& out);
void save_weights(const MlpNet& net, const std::filesystem::path& path);
MlpNet load_weights(std::istream& in);
MlpNet load_weights(const std::filesystem::path& path);

}  // namespace tracklab
