#include "pitplan/shells.hpp"

#include <algorithm>
#include <stdexcept>

#include "text_util.hpp"

namespace pitplan {

std::vector<int> ShellAssignment::pit_blocks() const {
  std::vector<int> out;
  for (size_t b = 0; b < shell_index.size(); ++b)
    if (shell_index[b] >= 1) out.push_back(static_cast<int>(b));
  return out;
}

double ShellAssignment::pit_tonnage(const BlockModel& model) const {
  double t = 0.0;
  for (size_t b = 0; b < shell_index.size(); ++b)
    if (shell_index[b] >= 1) t += model.blocks[b].tonnage;
  return t;
}

std::vector<double> default_revenue_factors() {
  std::vector<double> f(21);
  for (int s = 0; s < 21; ++s) f[static_cast<size_t>(s)] = 0.5 + 0.05 * s;
  return f;
}

ClosureProblem build_closure_problem(const BlockModel& model, const EconomicModel& econ,
                                     const PrecedenceGraph& precedence, double revenue_factor) {
  EconomicModel scaled = econ;
  scaled.price_per_tonne_metal = econ.price_per_tonne_metal * revenue_factor;
  ClosureProblem problem;
  problem.value_cents.resize(model.blocks.size());
  for (size_t b = 0; b < model.blocks.size(); ++b) {
    const double best = std::max(block_value(model.blocks[b], scaled, Destination::Process),
                                 block_value(model.blocks[b], scaled, Destination::Waste));
    problem.value_cents[b] = to_cents(best);
  }
  problem.arcs = precedence.arcs;
  return problem;
}

ShellAssignment nested_shells(const BlockModel& model, const EconomicModel& econ,
                              const PrecedenceGraph& precedence, std::span<const double> revenue_factors) {
  if (revenue_factors.empty()) throw std::runtime_error("nested_shells needs at least one revenue factor");
  for (size_t s = 0; s < revenue_factors.size(); ++s) {
    if (!(revenue_factors[s] > 0.0)) throw std::runtime_error("revenue factors must be > 0");
    if (s > 0 && !(revenue_factors[s] > revenue_factors[s - 1]))
      throw std::runtime_error("revenue factors must be strictly increasing");
  }

  ShellAssignment shells;
  shells.revenue_factors.assign(revenue_factors.begin(), revenue_factors.end());
  shells.shell_index.assign(model.blocks.size(), 0);

  std::vector<int> forced;  // previous closure, pinned into the next solve
  for (size_t s = 0; s < revenue_factors.size(); ++s) {
    const ClosureProblem problem = build_closure_problem(model, econ, precedence, revenue_factors[s]);
    const ClosureResult closure = max_closure(problem, forced);
    forced.clear();
    for (size_t b = 0; b < closure.in_closure.size(); ++b) {
      if (closure.in_closure[b]) {
        forced.push_back(static_cast<int>(b));
        if (shells.shell_index[b] == 0) shells.shell_index[b] = static_cast<int>(s) + 1;
      }
    }
  }
  return shells;
}

void save_shells(const ShellAssignment& shells, const BlockModel& model, const std::string& path) {
  auto out = detail::open_out(path);
  out << "# revenue_factors =";
  for (double f : shells.revenue_factors) out << ' ' << detail::fmt(f);
  out << "\n";
  out << "i,j,k,shell\n";
  for (size_t b = 0; b < shells.shell_index.size(); ++b) {
    if (shells.shell_index[b] >= 1) {
      const BlockIndex idx = model.blocks[b].index;
      out << idx.i << ',' << idx.j << ',' << idx.k << ',' << shells.shell_index[b] << "\n";
    }
  }
}

ShellAssignment load_shells(const std::string& path, const BlockModel& model) {
  detail::LineReader reader(path);
  ShellAssignment shells;
  shells.shell_index.assign(model.blocks.size(), 0);
  int max_shell = 0;
  std::string line;
  bool saw_header = false;
  while (reader.next_raw(line)) {
    if (line.front() == '#') {
      std::string_view body = detail::trim(std::string_view(line).substr(1));
      const size_t eq = body.find('=');
      if (eq != std::string_view::npos &&
          detail::trim(body.substr(0, eq)) == std::string_view("revenue_factors")) {
        for (auto part : detail::split(body.substr(eq + 1), ' '))
          if (!part.empty())
            shells.revenue_factors.push_back(
                detail::to_double(part, path, reader.line_no(), "revenue factor"));
      }
      continue;
    }
    if (!saw_header) {
      if (line != "i,j,k,shell") detail::parse_fail(path, reader.line_no(), "expected header i,j,k,shell");
      saw_header = true;
      continue;
    }
    auto f = detail::split(line, ',');
    if (f.size() != 4)
      detail::parse_fail(path, reader.line_no(), "expected 4 fields, got " + std::to_string(f.size()));
    BlockIndex idx{static_cast<int>(detail::to_long(f[0], path, reader.line_no(), "i")),
                   static_cast<int>(detail::to_long(f[1], path, reader.line_no(), "j")),
                   static_cast<int>(detail::to_long(f[2], path, reader.line_no(), "k"))};
    const int shell = static_cast<int>(detail::to_long(f[3], path, reader.line_no(), "shell"));
    if (!model.in_bounds(idx)) detail::parse_fail(path, reader.line_no(), "block index outside the model");
    if (shell < 1) detail::parse_fail(path, reader.line_no(), "shell ids start at 1");
    const int id = model.flat(idx);
    if (shells.shell_index[static_cast<size_t>(id)] != 0)
      detail::parse_fail(path, reader.line_no(), "duplicate block in shell file");
    shells.shell_index[static_cast<size_t>(id)] = shell;
    max_shell = std::max(max_shell, shell);
  }
  if (!saw_header) throw std::runtime_error(path + ": missing header i,j,k,shell");
  if (shells.revenue_factors.empty())
    for (int s = 0; s < max_shell; ++s) shells.revenue_factors.push_back(1.0 + s);
  if (static_cast<int>(shells.revenue_factors.size()) < max_shell)
    throw std::runtime_error(path + ": shell ids exceed the recorded revenue factor count");
  return shells;
}

}  // namespace pitplan
