#include "pitplan/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace pitplan {

namespace {

double stable_log_sum_exp(std::span<const double> logits) {
  double m = logits[0];
  for (double v : logits) m = std::max(m, v);
  double s = 0.0;
  for (double v : logits) s += std::exp(v - m);
  return m + std::log(s);
}

}  // namespace

GradeNetwork GradeNetwork::init(std::span<const DrillSample> samples, const InterpolatorConfig& config,
                                std::uint64_t seed) {
  if (samples.size() < 2) throw std::runtime_error("network training needs at least 2 samples");
  config.validate();

  GradeNetwork net;
  int max_domain = 0;
  Vec3 lo{samples[0].x, samples[0].y, samples[0].z}, hi = lo;
  for (const DrillSample& s : samples) {
    max_domain = std::max(max_domain, s.domain);
    lo = {std::min(lo.x, s.x), std::min(lo.y, s.y), std::min(lo.z, s.z)};
    hi = {std::max(hi.x, s.x), std::max(hi.y, s.y), std::max(hi.z, s.z)};
  }
  net.n_domains_ = max_domain + 1;
  net.norm_center_ = {(lo.x + hi.x) / 2, (lo.y + hi.y) / 2, (lo.z + hi.z) / 2};
  auto halfwidth = [](double l, double h) { return h > l ? (h - l) / 2 : 1.0; };
  net.norm_halfwidth_ = {halfwidth(lo.x, hi.x), halfwidth(lo.y, hi.y), halfwidth(lo.z, hi.z)};

  std::vector<int> widths;
  widths.push_back(3);
  for (int w : config.net_hidden_layers) widths.push_back(w);
  widths.push_back(1 + net.n_domains_);

  std::mt19937_64 rng(seed);
  for (size_t l = 0; l + 1 < widths.size(); ++l) {
    Layer layer;
    layer.in = widths[l];
    layer.out = widths[l + 1];
    const double limit = std::sqrt(6.0 / (layer.in + layer.out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    layer.w.resize(static_cast<size_t>(layer.in) * layer.out);
    for (double& w : layer.w) w = dist(rng);
    layer.b.assign(static_cast<size_t>(layer.out), 0.0);
    net.layers_.push_back(std::move(layer));
  }
  return net;
}

GradeNetwork GradeNetwork::train(std::span<const DrillSample> samples, const InterpolatorConfig& config,
                                 std::uint64_t seed) {
  GradeNetwork net = init(samples, config, seed);
  double current = net.loss(samples);
  int epoch = 0;
  while (current > config.net_fit_tolerance && epoch < config.net_max_epochs) {
    if (!std::isfinite(current))
      throw std::runtime_error("network training loss became non-finite at epoch " +
                               std::to_string(epoch));
    const std::vector<double> grads = net.loss_gradients(samples);
    std::vector<double> params = net.parameters();
    for (size_t p = 0; p < params.size(); ++p) params[p] -= config.learning_rate * grads[p];
    net.set_parameters(params);
    ++epoch;
    current = net.loss(samples);
  }
  if (!std::isfinite(current))
    throw std::runtime_error("network training loss became non-finite at epoch " + std::to_string(epoch));
  net.epochs_trained_ = epoch;
  net.final_loss_ = current;
  return net;
}

std::vector<double> GradeNetwork::normalize(Vec3 p) const {
  return {(p.x - norm_center_.x) / norm_halfwidth_.x, (p.y - norm_center_.y) / norm_halfwidth_.y,
          (p.z - norm_center_.z) / norm_halfwidth_.z};
}

std::vector<std::vector<double>> GradeNetwork::forward(const std::vector<double>& input) const {
  std::vector<std::vector<double>> acts;
  acts.push_back(input);
  for (size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    std::vector<double> z(static_cast<size_t>(layer.out));
    for (int o = 0; o < layer.out; ++o) {
      double v = layer.b[static_cast<size_t>(o)];
      const double* row = &layer.w[static_cast<size_t>(o) * layer.in];
      for (int in = 0; in < layer.in; ++in) v += row[in] * acts.back()[static_cast<size_t>(in)];
      z[static_cast<size_t>(o)] = v;
    }
    if (l + 1 < layers_.size())
      for (double& v : z) v = std::tanh(v);
    acts.push_back(std::move(z));
  }
  return acts;
}

GradeDomain GradeNetwork::evaluate(Vec3 p) const {
  const auto acts = forward(normalize(p));
  const std::vector<double>& out = acts.back();
  GradeDomain gd;
  gd.grade = std::clamp(out[0], 0.0, 1.0);
  gd.domain = 0;
  for (int d = 1; d < n_domains_; ++d)
    if (out[static_cast<size_t>(1 + d)] > out[static_cast<size_t>(1 + gd.domain)]) gd.domain = d;
  return gd;
}

std::size_t GradeNetwork::parameter_count() const {
  std::size_t n = 0;
  for (const Layer& l : layers_) n += l.w.size() + l.b.size();
  return n;
}

std::vector<double> GradeNetwork::parameters() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (const Layer& l : layers_) {
    out.insert(out.end(), l.w.begin(), l.w.end());
    out.insert(out.end(), l.b.begin(), l.b.end());
  }
  return out;
}

void GradeNetwork::set_parameters(std::span<const double> params) {
  if (params.size() != parameter_count())
    throw std::runtime_error("parameter vector size mismatch");
  size_t pos = 0;
  for (Layer& l : layers_) {
    std::copy(params.begin() + static_cast<long>(pos),
              params.begin() + static_cast<long>(pos + l.w.size()), l.w.begin());
    pos += l.w.size();
    std::copy(params.begin() + static_cast<long>(pos),
              params.begin() + static_cast<long>(pos + l.b.size()), l.b.begin());
    pos += l.b.size();
  }
}

double GradeNetwork::loss(std::span<const DrillSample> samples) const {
  const double n = static_cast<double>(samples.size());
  double total = 0.0;
  for (const DrillSample& s : samples) {
    const auto acts = forward(normalize({s.x, s.y, s.z}));
    const std::vector<double>& out = acts.back();
    const double ge = out[0] - s.grade;
    total += ge * ge;
    if (n_domains_ > 1) {
      const std::span<const double> logits(out.data() + 1, static_cast<size_t>(n_domains_));
      total += stable_log_sum_exp(logits) - logits[static_cast<size_t>(s.domain)];
    }
  }
  return total / n;
}

std::vector<double> GradeNetwork::loss_gradients(std::span<const DrillSample> samples) const {
  const double n = static_cast<double>(samples.size());
  // Gradient accumulators mirroring the layer layout.
  std::vector<std::vector<double>> gw(layers_.size()), gb(layers_.size());
  for (size_t l = 0; l < layers_.size(); ++l) {
    gw[l].assign(layers_[l].w.size(), 0.0);
    gb[l].assign(layers_[l].b.size(), 0.0);
  }

  for (const DrillSample& s : samples) {
    const auto acts = forward(normalize({s.x, s.y, s.z}));
    const std::vector<double>& out = acts.back();

    // dL/d(output): squared error on the grade head, softmax CE on the scores.
    std::vector<double> delta(out.size(), 0.0);
    delta[0] = 2.0 * (out[0] - s.grade) / n;
    if (n_domains_ > 1) {
      const std::span<const double> logits(out.data() + 1, static_cast<size_t>(n_domains_));
      const double lse = stable_log_sum_exp(logits);
      for (int d = 0; d < n_domains_; ++d) {
        const double soft = std::exp(logits[static_cast<size_t>(d)] - lse);
        delta[static_cast<size_t>(1 + d)] = (soft - (d == s.domain ? 1.0 : 0.0)) / n;
      }
    }

    for (size_t l = layers_.size(); l-- > 0;) {
      const Layer& layer = layers_[l];
      const std::vector<double>& a_in = acts[l];
      for (int o = 0; o < layer.out; ++o) {
        const double d = delta[static_cast<size_t>(o)];
        gb[l][static_cast<size_t>(o)] += d;
        double* grow = &gw[l][static_cast<size_t>(o) * layer.in];
        for (int in = 0; in < layer.in; ++in) grow[in] += d * a_in[static_cast<size_t>(in)];
      }
      if (l == 0) break;
      std::vector<double> prev(static_cast<size_t>(layer.in), 0.0);
      for (int in = 0; in < layer.in; ++in) {
        double v = 0.0;
        for (int o = 0; o < layer.out; ++o)
          v += layer.w[static_cast<size_t>(o) * layer.in + in] * delta[static_cast<size_t>(o)];
        const double a = acts[l][static_cast<size_t>(in)];  // tanh output of layer l-1
        prev[static_cast<size_t>(in)] = v * (1.0 - a * a);
      }
      delta = std::move(prev);
    }
  }

  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (size_t l = 0; l < layers_.size(); ++l) {
    flat.insert(flat.end(), gw[l].begin(), gw[l].end());
    flat.insert(flat.end(), gb[l].begin(), gb[l].end());
  }
  return flat;
}

}  // namespace pitplan
