#include "pitplan/io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "text_util.hpp"

namespace pitplan {

using detail::fmt;
using detail::parse_fail;
using detail::split;
using detail::to_double;
using detail::to_long;

namespace {

struct ModelMeta {
  Vec3 block_size{1.0, 1.0, 1.0};
  Vec3 origin{0.0, 0.0, 0.0};
  std::string element = "Cu";
};

// Reads any `# key = value` lines before the CSV header.
ModelMeta read_meta(detail::LineReader& reader, std::string& first_data_line) {
  ModelMeta meta;
  std::string line;
  while (reader.next_raw(line)) {
    if (line.front() != '#') {
      first_data_line = line;
      return meta;
    }
    std::string_view body = detail::trim(std::string_view(line).substr(1));
    const size_t eq = body.find('=');
    if (eq == std::string_view::npos) continue;  // plain comment
    const std::string key(detail::trim(body.substr(0, eq)));
    const std::string_view val = detail::trim(body.substr(eq + 1));
    if (key == "element") {
      meta.element = std::string(val);
    } else if (key == "block_size" || key == "origin") {
      auto parts = split(val, ' ');
      parts.erase(std::remove_if(parts.begin(), parts.end(), [](auto p) { return p.empty(); }),
                  parts.end());
      if (parts.size() != 3) parse_fail(reader.path(), reader.line_no(), key + " needs 3 values");
      Vec3 v{to_double(parts[0], reader.path(), reader.line_no(), key.c_str()),
             to_double(parts[1], reader.path(), reader.line_no(), key.c_str()),
             to_double(parts[2], reader.path(), reader.line_no(), key.c_str())};
      (key == "block_size" ? meta.block_size : meta.origin) = v;
    }
  }
  parse_fail(reader.path(), reader.line_no(), "missing CSV header");
}

void expect_header(const std::string& got, const std::vector<std::string>& want,
                   const std::string& path, size_t line_no, bool allow_extra = false) {
  auto cols = split(got, ',');
  if (cols.size() < want.size() || (!allow_extra && cols.size() > want.size()))
    parse_fail(path, line_no, "expected header with columns " + [&] {
      std::string s;
      for (const auto& w : want) s += (s.empty() ? "" : ",") + w;
      return s;
    }() + ", got '" + got + "'");
  for (size_t c = 0; c < want.size(); ++c)
    if (cols[c] != want[c])
      parse_fail(path, line_no, "expected column '" + want[c] + "' at position " +
                                    std::to_string(c + 1) + ", got '" + std::string(cols[c]) + "'");
}

}  // namespace

BlockModel load_block_model(const std::string& path) {
  detail::LineReader reader(path);
  std::string header;
  const ModelMeta meta = read_meta(reader, header);
  expect_header(header, {"i", "j", "k", "tonnage", "grade", "domain"}, path, reader.line_no(),
                /*allow_extra=*/true);  // tolerates a trailing stage column
  const size_t n_cols = split(header, ',').size();

  struct Row {
    BlockIndex idx;
    double tonnage, grade;
    int domain;
    size_t line;
  };
  std::vector<Row> rows;
  std::set<std::tuple<int, int, int>> seen_idx;
  GridDims dims{0, 0, 0};
  std::string line;
  while (reader.next(line)) {
    auto f = split(line, ',');
    if (f.size() != n_cols)
      parse_fail(path, reader.line_no(),
                 "expected " + std::to_string(n_cols) + " fields, got " + std::to_string(f.size()));
    Row r;
    r.idx.i = static_cast<int>(to_long(f[0], path, reader.line_no(), "i"));
    r.idx.j = static_cast<int>(to_long(f[1], path, reader.line_no(), "j"));
    r.idx.k = static_cast<int>(to_long(f[2], path, reader.line_no(), "k"));
    r.tonnage = to_double(f[3], path, reader.line_no(), "tonnage");
    r.grade = to_double(f[4], path, reader.line_no(), "grade");
    r.domain = static_cast<int>(to_long(f[5], path, reader.line_no(), "domain"));
    r.line = reader.line_no();
    if (r.idx.i < 0 || r.idx.j < 0 || r.idx.k < 0)
      parse_fail(path, r.line, "negative block index");
    if (!(r.tonnage > 0.0)) parse_fail(path, r.line, "tonnage must be > 0");
    if (!(r.grade >= 0.0 && r.grade <= 1.0)) parse_fail(path, r.line, "grade must be in [0,1]");
    if (r.domain < 0) parse_fail(path, r.line, "domain must be >= 0");
    if (!seen_idx.insert({r.idx.i, r.idx.j, r.idx.k}).second)
      parse_fail(path, r.line, "duplicate block (" + std::to_string(r.idx.i) + "," +
                                   std::to_string(r.idx.j) + "," + std::to_string(r.idx.k) + ")");
    dims.nx = std::max(dims.nx, r.idx.i + 1);
    dims.ny = std::max(dims.ny, r.idx.j + 1);
    dims.nz = std::max(dims.nz, r.idx.k + 1);
    rows.push_back(r);
  }
  if (rows.empty()) parse_fail(path, reader.line_no(), "block model file has no rows");
  if (rows.size() != static_cast<size_t>(dims.count()))
    throw std::runtime_error(path + ": " + std::to_string(rows.size()) + " rows do not fill the " +
                             std::to_string(dims.nx) + "x" + std::to_string(dims.ny) + "x" +
                             std::to_string(dims.nz) + " grid they span");

  BlockModel model(dims, meta.block_size, meta.origin, meta.element);
  for (const Row& r : rows) {
    Block& b = model.blocks[static_cast<size_t>(model.flat(r.idx))];
    b.tonnage = r.tonnage;
    b.grade = r.grade;
    b.domain = r.domain;
  }
  model.validate();
  return model;
}

void save_block_model(const BlockModel& model, const std::string& path) {
  auto out = detail::open_out(path);
  out << "# element = " << model.element_name << "\n";
  out << "# block_size = " << fmt(model.block_size.x) << ' ' << fmt(model.block_size.y) << ' '
      << fmt(model.block_size.z) << "\n";
  out << "# origin = " << fmt(model.origin.x) << ' ' << fmt(model.origin.y) << ' '
      << fmt(model.origin.z) << "\n";
  out << "i,j,k,tonnage,grade,domain\n";
  for (const Block& b : model.blocks)
    out << b.index.i << ',' << b.index.j << ',' << b.index.k << ',' << fmt(b.tonnage) << ','
        << fmt(b.grade) << ',' << b.domain << "\n";
}

std::vector<DrillSample> load_samples(const std::string& path) {
  detail::LineReader reader(path);
  std::string line;
  if (!reader.next(line)) parse_fail(path, reader.line_no(), "empty samples file");
  expect_header(line, {"x", "y", "z", "grade", "domain"}, path, reader.line_no());
  std::vector<DrillSample> samples;
  while (reader.next(line)) {
    auto f = split(line, ',');
    if (f.size() != 5)
      parse_fail(path, reader.line_no(), "expected 5 fields, got " + std::to_string(f.size()));
    DrillSample s;
    s.x = to_double(f[0], path, reader.line_no(), "x");
    s.y = to_double(f[1], path, reader.line_no(), "y");
    s.z = to_double(f[2], path, reader.line_no(), "z");
    s.grade = to_double(f[3], path, reader.line_no(), "grade");
    s.domain = static_cast<int>(to_long(f[4], path, reader.line_no(), "domain"));
    if (!(s.grade >= 0.0 && s.grade <= 1.0)) parse_fail(path, reader.line_no(), "grade must be in [0,1]");
    if (s.domain < 0) parse_fail(path, reader.line_no(), "domain must be >= 0");
    samples.push_back(s);
  }
  return samples;
}

void save_samples(const std::vector<DrillSample>& samples, const std::string& path) {
  auto out = detail::open_out(path);
  out << "x,y,z,grade,domain\n";
  for (const DrillSample& s : samples)
    out << fmt(s.x) << ',' << fmt(s.y) << ',' << fmt(s.z) << ',' << fmt(s.grade) << ',' << s.domain
        << "\n";
}

Calendar load_calendar(const std::string& path) {
  detail::LineReader reader(path);
  std::string line;
  if (!reader.next(line)) parse_fail(path, reader.line_no(), "empty calendar file");
  expect_header(line, {"period", "mining_capacity", "plant_capacity"}, path, reader.line_no());
  Calendar cal;
  long expected = 1;
  while (reader.next(line)) {
    auto f = split(line, ',');
    if (f.size() != 3)
      parse_fail(path, reader.line_no(), "expected 3 fields, got " + std::to_string(f.size()));
    const long period = to_long(f[0], path, reader.line_no(), "period");
    if (period != expected)
      parse_fail(path, reader.line_no(),
                 "periods must be contiguous from 1; expected " + std::to_string(expected) + ", got " +
                     std::to_string(period));
    CalendarPeriod p;
    p.mining_capacity = to_double(f[1], path, reader.line_no(), "mining_capacity");
    p.plant_capacity = to_double(f[2], path, reader.line_no(), "plant_capacity");
    if (p.mining_capacity < 0.0 || p.plant_capacity < 0.0)
      parse_fail(path, reader.line_no(), "capacities must be >= 0");
    cal.periods.push_back(p);
    ++expected;
  }
  cal.validate();
  return cal;
}

void save_calendar(const Calendar& calendar, const std::string& path) {
  auto out = detail::open_out(path);
  out << "period,mining_capacity,plant_capacity\n";
  for (int t = 1; t <= calendar.t_max(); ++t)
    out << t << ',' << fmt(calendar.period(t).mining_capacity) << ','
        << fmt(calendar.period(t).plant_capacity) << "\n";
}

EconomicModel load_economics(const std::string& path) {
  detail::LineReader reader(path);
  EconomicModel econ;
  std::set<std::string> present;
  std::string line;
  while (reader.next(line)) {
    const size_t eq = line.find('=');
    if (eq == std::string::npos) parse_fail(path, reader.line_no(), "expected 'key = value'");
    const std::string key(detail::trim(std::string_view(line).substr(0, eq)));
    const std::string_view val = detail::trim(std::string_view(line).substr(eq + 1));
    const double v = to_double(val, path, reader.line_no(), key.c_str());
    if (key == "price_per_tonne_metal") econ.price_per_tonne_metal = v;
    else if (key == "mining_cost") econ.mining_cost = v;
    else if (key == "processing_cost") econ.processing_cost = v;
    else if (key == "selling_cost") econ.selling_cost = v;
    else if (key == "rehab_cost") econ.rehab_cost = v;
    else if (key == "cutoff_grade") econ.cutoff_grade = v;
    else if (key == "discount_rate") econ.discount_rate = v;
    else if (key.rfind("recovery_domain_", 0) == 0) {
      const long id = to_long(std::string_view(key).substr(16), path, reader.line_no(), "domain id");
      if (id < 0) parse_fail(path, reader.line_no(), "recovery domain id must be >= 0");
      if (!(v > 0.0 && v <= 1.0)) parse_fail(path, reader.line_no(), "recovery must be in (0,1]");
      econ.recovery_by_domain[static_cast<int>(id)] = v;
      present.insert("recovery");
      continue;
    } else {
      parse_fail(path, reader.line_no(), "unknown economics key '" + key + "'");
    }
    present.insert(key);
  }
  for (const char* required :
       {"price_per_tonne_metal", "mining_cost", "processing_cost", "selling_cost", "rehab_cost",
        "cutoff_grade", "discount_rate", "recovery"})
    if (!present.count(required))
      throw std::runtime_error(path + ": missing economics key '" + std::string(required) + "'");
  if (econ.price_per_tonne_metal < 0.0 || econ.mining_cost < 0.0 || econ.processing_cost < 0.0 ||
      econ.selling_cost < 0.0 || econ.rehab_cost < 0.0)
    throw std::runtime_error(path + ": prices and costs must be >= 0");
  if (!(econ.cutoff_grade >= 0.0 && econ.cutoff_grade < 1.0))
    throw std::runtime_error(path + ": cutoff_grade must be in [0,1)");
  if (econ.discount_rate < 0.0) throw std::runtime_error(path + ": discount_rate must be >= 0");
  return econ;
}

void save_economics(const EconomicModel& econ, const std::string& path) {
  auto out = detail::open_out(path);
  out << "price_per_tonne_metal = " << fmt(econ.price_per_tonne_metal) << "\n";
  out << "mining_cost = " << fmt(econ.mining_cost) << "\n";
  out << "processing_cost = " << fmt(econ.processing_cost) << "\n";
  out << "selling_cost = " << fmt(econ.selling_cost) << "\n";
  out << "rehab_cost = " << fmt(econ.rehab_cost) << "\n";
  out << "cutoff_grade = " << fmt(econ.cutoff_grade) << "\n";
  out << "discount_rate = " << fmt(econ.discount_rate) << "\n";
  for (const auto& [domain, recovery] : econ.recovery_by_domain)
    out << "recovery_domain_" << domain << " = " << fmt(recovery) << "\n";
}

}  // namespace pitplan
