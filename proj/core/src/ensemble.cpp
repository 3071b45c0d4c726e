#include "pitplan/ensemble.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <stdexcept>

#include "pitplan/io.hpp"
#include "pitplan/network.hpp"
#include "text_util.hpp"

namespace pitplan {

namespace {

std::string member_filename(int m) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "member_%02d.csv", m);
  return buf;
}

BlockModel evaluate_idw(std::span<const DrillSample> samples, const InterpolatorConfig& config,
                        double power, const BlockModel& geometry) {
  InterpolatorConfig local = config;
  local.idw_power = power;
  BlockModel member = geometry;
  for (Block& b : member.blocks) {
    const GradeDomain gd = idw_interpolate(samples, local, member.centroid(b.index));
    b.grade = gd.grade;
    b.domain = gd.domain;
  }
  return member;
}

BlockModel evaluate_network(const GradeNetwork& net, const BlockModel& geometry) {
  BlockModel member = geometry;
  for (Block& b : member.blocks) {
    const GradeDomain gd = net.evaluate(member.centroid(b.index));
    b.grade = gd.grade;
    b.domain = gd.domain;
  }
  return member;
}

}  // namespace

Ensemble build_ensemble(std::span<const DrillSample> samples, const InterpolatorConfig& config,
                        int n_members, std::uint64_t base_seed, const BlockModel& geometry) {
  if (n_members < 1) throw std::runtime_error("ensemble needs at least one member");
  if (samples.empty()) throw std::runtime_error("ensemble needs at least one sample");
  config.validate();

  Ensemble ens;
  for (int m = 0; m < n_members; ++m) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(m);
    ens.member_seeds.push_back(seed);
    if (config.method == InterpolationMethod::Network) {
      ens.members.push_back(evaluate_network(GradeNetwork::train(samples, config, seed), geometry));
      continue;
    }
    if (n_members == 1) {
      // Degenerate ensemble: no jitter, no resample.
      ens.members.push_back(evaluate_idw(samples, config, config.idw_power, geometry));
      continue;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(0.75, 1.25);
    const double power = config.idw_power * jitter(rng);
    const size_t draw =
        std::max<size_t>(1, static_cast<size_t>(std::llround(config.bootstrap_fraction *
                                                             static_cast<double>(samples.size()))));
    std::vector<DrillSample> resampled(draw);
    std::uniform_int_distribution<size_t> pick(0, samples.size() - 1);
    for (size_t s = 0; s < draw; ++s) resampled[s] = samples[pick(rng)];
    ens.members.push_back(evaluate_idw(resampled, config, power, geometry));
  }
  return ens;
}

BlockModel aggregate(const Ensemble& ensemble) {
  if (ensemble.members.empty()) throw std::runtime_error("cannot aggregate an empty ensemble");
  for (const BlockModel& m : ensemble.members)
    if (!m.same_geometry(ensemble.members.front()))
      throw std::runtime_error("ensemble members do not share geometry");

  BlockModel agg = ensemble.members.front();
  for (size_t n = 0; n < agg.blocks.size(); ++n) {
    std::map<int, int> votes;
    for (const BlockModel& m : ensemble.members) ++votes[m.blocks[n].domain];
    int best = votes.begin()->first, best_count = votes.begin()->second;
    for (const auto& [dom, count] : votes)
      if (count > best_count) {  // ascending ids: ties keep the lowest
        best = dom;
        best_count = count;
      }
    double grade_sum = 0.0;
    int agreeing = 0;
    for (const BlockModel& m : ensemble.members)
      if (m.blocks[n].domain == best) {
        grade_sum += m.blocks[n].grade;
        ++agreeing;
      }
    agg.blocks[n].domain = best;
    agg.blocks[n].grade = grade_sum / agreeing;
  }
  return agg;
}

UncertaintyField uncertainty_field(const Ensemble& ensemble, const BlockModel& aggregate_model) {
  const size_t n_blocks = aggregate_model.blocks.size();
  const double n = static_cast<double>(ensemble.members.size());
  UncertaintyField field;
  field.grade_std.assign(n_blocks, 0.0);
  field.domain_disagreement.assign(n_blocks, 0.0);
  for (size_t b = 0; b < n_blocks; ++b) {
    double mean = 0.0;
    int off = 0;
    for (const BlockModel& m : ensemble.members) {
      mean += m.blocks[b].grade;
      if (m.blocks[b].domain != aggregate_model.blocks[b].domain) ++off;
    }
    mean /= n;
    double var = 0.0;
    for (const BlockModel& m : ensemble.members) {
      const double d = m.blocks[b].grade - mean;
      var += d * d;
    }
    field.grade_std[b] = std::sqrt(var / n);
    field.domain_disagreement[b] = off / n;
  }
  return field;
}

void save_ensemble(const Ensemble& ensemble, const BlockModel& aggregate_model,
                   const InterpolatorConfig& config, std::uint64_t base_seed, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (int m = 0; m < ensemble.size(); ++m)
    save_block_model(ensemble.members[static_cast<size_t>(m)], dir + "/" + member_filename(m));
  save_block_model(aggregate_model, dir + "/aggregate.csv");

  auto out = detail::open_out(dir + "/ensemble.meta");
  out << "method = " << (config.method == InterpolationMethod::IDW ? "idw" : "network") << "\n";
  out << "n_members = " << ensemble.size() << "\n";
  out << "base_seed = " << base_seed << "\n";
  out << "idw_power = " << detail::fmt(config.idw_power) << "\n";
  out << "idw_max_neighbors = " << config.idw_max_neighbors << "\n";
  out << "bootstrap_fraction = " << detail::fmt(config.bootstrap_fraction) << "\n";
  out << "net_hidden_layers =";
  for (int w : config.net_hidden_layers) out << ' ' << w;
  out << "\n";
  out << "net_fit_tolerance = " << detail::fmt(config.net_fit_tolerance) << "\n";
  out << "net_max_epochs = " << config.net_max_epochs << "\n";
  out << "learning_rate = " << detail::fmt(config.learning_rate) << "\n";
  for (int m = 0; m < ensemble.size(); ++m)
    out << "member_seed_" << m << " = " << ensemble.member_seeds[static_cast<size_t>(m)] << "\n";
}

LoadedEnsemble load_ensemble(const std::string& dir) {
  LoadedEnsemble result;
  const std::string meta_path = dir + "/ensemble.meta";
  detail::LineReader reader(meta_path);
  std::string line;
  int n_members = -1;
  std::map<int, std::uint64_t> seeds;
  while (reader.next(line)) {
    const size_t eq = line.find('=');
    if (eq == std::string::npos) detail::parse_fail(meta_path, reader.line_no(), "expected 'key = value'");
    const std::string key(detail::trim(std::string_view(line).substr(0, eq)));
    const std::string val(detail::trim(std::string_view(line).substr(eq + 1)));
    if (key == "method") {
      if (val == "idw") result.config.method = InterpolationMethod::IDW;
      else if (val == "network") result.config.method = InterpolationMethod::Network;
      else detail::parse_fail(meta_path, reader.line_no(), "unknown method '" + val + "'");
    } else if (key == "n_members") {
      n_members = static_cast<int>(detail::to_long(val, meta_path, reader.line_no(), "n_members"));
    } else if (key == "base_seed") {
      result.base_seed = static_cast<std::uint64_t>(
          detail::to_double(val, meta_path, reader.line_no(), "base_seed"));
    } else if (key == "idw_power") {
      result.config.idw_power = detail::to_double(val, meta_path, reader.line_no(), "idw_power");
    } else if (key == "idw_max_neighbors") {
      result.config.idw_max_neighbors =
          static_cast<int>(detail::to_long(val, meta_path, reader.line_no(), "idw_max_neighbors"));
    } else if (key == "bootstrap_fraction") {
      result.config.bootstrap_fraction =
          detail::to_double(val, meta_path, reader.line_no(), "bootstrap_fraction");
    } else if (key == "net_hidden_layers") {
      result.config.net_hidden_layers.clear();
      for (auto part : detail::split(val, ' '))
        if (!part.empty())
          result.config.net_hidden_layers.push_back(
              static_cast<int>(detail::to_long(part, meta_path, reader.line_no(), "hidden layer")));
    } else if (key == "net_fit_tolerance") {
      result.config.net_fit_tolerance =
          detail::to_double(val, meta_path, reader.line_no(), "net_fit_tolerance");
    } else if (key == "net_max_epochs") {
      result.config.net_max_epochs =
          static_cast<int>(detail::to_long(val, meta_path, reader.line_no(), "net_max_epochs"));
    } else if (key == "learning_rate") {
      result.config.learning_rate = detail::to_double(val, meta_path, reader.line_no(), "learning_rate");
    } else if (key.rfind("member_seed_", 0) == 0) {
      const int m = static_cast<int>(detail::to_long(std::string_view(key).substr(12), meta_path,
                                                     reader.line_no(), "member id"));
      seeds[m] = static_cast<std::uint64_t>(detail::to_double(val, meta_path, reader.line_no(), key.c_str()));
    } else {
      detail::parse_fail(meta_path, reader.line_no(), "unknown ensemble.meta key '" + key + "'");
    }
  }
  if (n_members < 1) throw std::runtime_error(meta_path + ": missing or invalid n_members");

  for (int m = 0; m < n_members; ++m) {
    result.ensemble.members.push_back(load_block_model(dir + "/" + member_filename(m)));
    auto it = seeds.find(m);
    result.ensemble.member_seeds.push_back(it == seeds.end() ? result.base_seed + static_cast<std::uint64_t>(m)
                                                             : it->second);
  }
  result.aggregate = load_block_model(dir + "/aggregate.csv");
  for (const BlockModel& m : result.ensemble.members)
    if (!m.same_geometry(result.aggregate))
      throw std::runtime_error(dir + ": ensemble members and aggregate do not share geometry");
  return result;
}

}  // namespace pitplan
