#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pitplan/block_model.hpp"
#include "pitplan/interpolate.hpp"

namespace pitplan {

/// Fully connected interpolator: normalized (x,y,z) in, a grade regression
/// head plus per-domain score head out. Trained by full-batch gradient
/// descent on squared grade error + domain cross-entropy, equally weighted.
class GradeNetwork {
 public:
  /// Deterministic initialization from seed; no training steps taken.
  static GradeNetwork init(std::span<const DrillSample> samples, const InterpolatorConfig& config,
                           std::uint64_t seed);
  /// init + gradient descent until loss <= net_fit_tolerance or
  /// net_max_epochs. Throws if the loss turns non-finite, reporting the epoch.
  static GradeNetwork train(std::span<const DrillSample> samples, const InterpolatorConfig& config,
                            std::uint64_t seed);

  /// Grade clamped to [0,1]; domain is the argmax score (ties: lowest id).
  GradeDomain evaluate(Vec3 p) const;

  // Flat parameter access, used by training and by gradient verification.
  std::size_t parameter_count() const;
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> params);

  double loss(std::span<const DrillSample> samples) const;
  std::vector<double> loss_gradients(std::span<const DrillSample> samples) const;

  int epochs_trained() const { return epochs_trained_; }
  double final_loss() const { return final_loss_; }
  int n_domains() const { return n_domains_; }

 private:
  struct Layer {
    int in = 0, out = 0;
    std::vector<double> w;  // row-major [out][in]
    std::vector<double> b;  // [out]
  };

  std::vector<double> normalize(Vec3 p) const;
  // Forward pass keeping activations per layer; returns the output vector.
  std::vector<std::vector<double>> forward(const std::vector<double>& input) const;

  std::vector<Layer> layers_;  // hidden layers then the (1 + n_domains) output layer
  int n_domains_ = 1;
  Vec3 norm_center_{}, norm_halfwidth_{1, 1, 1};
  int epochs_trained_ = 0;
  double final_loss_ = 0.0;
};

}  // namespace pitplan
