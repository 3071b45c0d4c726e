#include "pitplan/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "text_util.hpp"

namespace pitplan {

namespace {

double dust(double capacity) { return 1e-9 * std::max(1.0, capacity); }

void require_valid_chromosome(const Chromosome& chromosome, const UnitPrecedence& prec) {
  if (chromosome.size() != static_cast<size_t>(prec.n_units))
    throw std::runtime_error("chromosome length does not match unit count");
  std::vector<int> pos(static_cast<size_t>(prec.n_units), -1);
  for (size_t p = 0; p < chromosome.size(); ++p) {
    const int u = chromosome[p];
    if (u < 0 || u >= prec.n_units || pos[static_cast<size_t>(u)] >= 0)
      throw std::runtime_error("chromosome is not a permutation of unit ids");
    pos[static_cast<size_t>(u)] = static_cast<int>(p);
  }
  for (const auto& [from, to] : prec.arcs)
    if (pos[static_cast<size_t>(from)] > pos[static_cast<size_t>(to)])
      throw std::runtime_error("chromosome violates unit precedence (unit " + std::to_string(from) +
                               " must precede " + std::to_string(to) + ")");
}

std::vector<MiningStep> greedy_timing(const Chromosome& chromosome, const UnitGraph& units,
                                      const Calendar& calendar) {
  const int n = units.precedence.n_units;
  std::vector<double> remaining(static_cast<size_t>(n), 1.0);
  std::vector<char> complete(static_cast<size_t>(n), 0);
  std::vector<MiningStep> plan;
  int done = 0;

  for (int t = 1; t <= calendar.t_max() && done < n; ++t) {
    const double cap = calendar.period(t).mining_capacity;
    double m_rem = cap;
    bool progress = true;
    // Re-sweep after any progress: a unit may start in the period its last
    // predecessor completes.
    while (progress && m_rem > dust(cap)) {
      progress = false;
      for (int u : chromosome) {
        if (complete[static_cast<size_t>(u)]) continue;
        bool ready = true;
        for (int p : units.precedence.preds[static_cast<size_t>(u)])
          if (!complete[static_cast<size_t>(p)]) {
            ready = false;
            break;
          }
        if (!ready) continue;

        const double tonnage = units.units[static_cast<size_t>(u)].tonnage;
        const double available = remaining[static_cast<size_t>(u)] * tonnage;
        double fraction;
        if (available <= m_rem * (1.0 + 1e-12)) {
          fraction = remaining[static_cast<size_t>(u)];  // unit completes this period
        } else {
          fraction = m_rem / tonnage;
        }
        if (fraction * tonnage <= dust(cap)) continue;

        plan.push_back({t, u, fraction});
        remaining[static_cast<size_t>(u)] -= fraction;
        if (remaining[static_cast<size_t>(u)] <= 1e-12) {
          remaining[static_cast<size_t>(u)] = 0.0;
          complete[static_cast<size_t>(u)] = 1;
          ++done;
        }
        m_rem -= fraction * tonnage;
        progress = true;
        if (m_rem <= dust(cap)) break;
      }
    }
  }
  return plan;
}

/// Shared destination policy. Both decode and replay funnel through here so a
/// replay on the decoding model reproduces the decode bit for bit.
Schedule run_plan(std::span<const MiningStep> plan, const UnitGraph& units, const BlockModel& model,
                  const Calendar& calendar, const EconomicModel& econ, bool stockpiling) {
  Schedule schedule;
  schedule.stockpiling = stockpiling;
  schedule.periods.resize(static_cast<size_t>(calendar.t_max()));

  const double mined_cost_per_tonne = econ.mining_cost + econ.rehab_cost;
  auto margin = [&](int block) {
    const Block& b = model.blocks[static_cast<size_t>(block)];
    return process_margin_per_tonne(b.grade, b.domain, econ);
  };
  auto grade_before = [&](int a, int b) {
    const double ga = model.blocks[static_cast<size_t>(a)].grade;
    const double gb = model.blocks[static_cast<size_t>(b)].grade;
    return ga != gb ? ga > gb : a < b;
  };

  std::vector<double> stockpile(model.blocks.size(), 0.0);  // tonnes by source block
  size_t cursor = 0;
  for (int t = 1; t <= calendar.t_max(); ++t) {
    PeriodRecord& rec = schedule.periods[static_cast<size_t>(t - 1)];
    const double plant_cap = calendar.period(t).plant_capacity;
    double p_rem = plant_cap;

    // Fresh parcels of the whole period compete for the plant by grade, so
    // destinations are independent of the order extraction rows are stored.
    struct PendingParcel {
      int block;
      size_t record;
      size_t parcel;
    };
    std::vector<PendingParcel> fresh;
    for (; cursor < plan.size() && plan[cursor].period == t; ++cursor) {
      const MiningStep& step = plan[cursor];
      const StageBenchUnit& unit = units.units[static_cast<size_t>(step.unit)];
      ExtractionRecord er;
      er.unit = step.unit;
      er.fraction = step.fraction;
      er.tonnes = step.fraction * unit.tonnage;
      rec.mined += er.tonnes;
      for (int b : unit.blocks) {
        BlockParcel bp;
        bp.block = b;
        fresh.push_back({b, rec.extractions.size(), er.parcels.size()});
        er.parcels.push_back(bp);
      }
      rec.extractions.push_back(std::move(er));
    }
    std::sort(fresh.begin(), fresh.end(),
              [&](const PendingParcel& a, const PendingParcel& b) {
                return grade_before(a.block, b.block);
              });
    for (const PendingParcel& pending : fresh) {
      ExtractionRecord& er = rec.extractions[pending.record];
      BlockParcel& bp = er.parcels[pending.parcel];
      const Block& blk = model.blocks[static_cast<size_t>(pending.block)];
      const double parcel = er.fraction * blk.tonnage;
      er.cashflow -= parcel * mined_cost_per_tonne;
      const bool worth_milling = blk.grade >= econ.cutoff_grade && margin(pending.block) > 0.0;
      if (worth_milling) {
        const double to_mill = std::min(parcel, std::max(p_rem, 0.0));
        if (to_mill > 0.0) {
          bp.to_mill = to_mill;
          p_rem -= to_mill;
          rec.milled += to_mill;
          er.cashflow += to_mill * margin(pending.block);
        }
        const double overflow = parcel - to_mill;
        if (overflow > 0.0) {
          if (stockpiling) {
            bp.to_stockpile = overflow;
            stockpile[static_cast<size_t>(pending.block)] += overflow;
            rec.stockpiled += overflow;
          } else {
            bp.to_waste = overflow;
            rec.wasted += overflow;
          }
        }
      } else {
        bp.to_waste = parcel;
        rec.wasted += parcel;
      }
    }
    for (const ExtractionRecord& er : rec.extractions) rec.cashflow += er.cashflow;

    if (stockpiling && p_rem > dust(plant_cap)) {
      std::vector<int> held;
      for (size_t b = 0; b < stockpile.size(); ++b)
        if (stockpile[b] > 0.0) held.push_back(static_cast<int>(b));
      std::sort(held.begin(), held.end(), grade_before);
      for (int b : held) {
        if (p_rem <= dust(plant_cap)) break;
        const double take = std::min(stockpile[static_cast<size_t>(b)], p_rem);
        stockpile[static_cast<size_t>(b)] -= take;
        p_rem -= take;
        const double cash = take * margin(b);
        rec.reclaims.push_back({b, take, cash});
        rec.reclaimed += take;
        rec.cashflow += cash;
      }
    }

    for (size_t b = 0; b < stockpile.size(); ++b)
      if (stockpile[b] > 0.0) rec.stockpile_after.push_back({static_cast<int>(b), stockpile[b]});
  }
  return schedule;
}

}  // namespace

std::vector<MiningStep> Schedule::mining_plan() const {
  std::vector<MiningStep> plan;
  for (int t = 1; t <= t_max(); ++t)
    for (const ExtractionRecord& er : periods[static_cast<size_t>(t - 1)].extractions)
      plan.push_back({t, er.unit, er.fraction});
  return plan;
}

std::vector<double> Schedule::cash_flows() const {
  std::vector<double> out;
  for (const PeriodRecord& p : periods) out.push_back(p.cashflow);
  return out;
}

Schedule decode(const Chromosome& chromosome, const UnitGraph& units, const BlockModel& model,
                const Calendar& calendar, const EconomicModel& econ, bool stockpiling) {
  calendar.validate();
  require_valid_chromosome(chromosome, units.precedence);
  const std::vector<MiningStep> plan = greedy_timing(chromosome, units, calendar);
  return run_plan(plan, units, model, calendar, econ, stockpiling);
}

Schedule replay_plan(std::span<const MiningStep> plan, const UnitGraph& units, const BlockModel& model,
                     const Calendar& calendar, const EconomicModel& econ, bool stockpiling) {
  calendar.validate();
  for (size_t s = 0; s < plan.size(); ++s) {
    if (plan[s].period < 1 || plan[s].period > calendar.t_max())
      throw std::runtime_error("mining plan step outside the calendar");
    if (s > 0 && plan[s].period < plan[s - 1].period)
      throw std::runtime_error("mining plan must be ordered by period");
    if (plan[s].unit < 0 || plan[s].unit >= units.precedence.n_units)
      throw std::runtime_error("mining plan references unknown unit");
  }
  return run_plan(plan, units, model, calendar, econ, stockpiling);
}

double npv(const Schedule& schedule, const EconomicModel& econ) {
  double total = 0.0;
  double discount = 1.0;
  for (const PeriodRecord& p : schedule.periods) {
    total += p.cashflow / discount;
    discount *= 1.0 + econ.discount_rate;
  }
  return total;
}

std::vector<Violation> validate(const Schedule& schedule, const UnitGraph& units,
                                const Calendar& calendar) {
  std::vector<Violation> out;
  const int n = units.precedence.n_units;
  const double rel = 1e-9;

  std::vector<double> unit_fraction(static_cast<size_t>(n), 0.0);
  std::vector<int> first_period(static_cast<size_t>(n), 0), complete_period(static_cast<size_t>(n), 0);
  std::map<int, double> block_stocked, block_reclaimed;

  for (int t = 1; t <= schedule.t_max(); ++t) {
    const PeriodRecord& rec = schedule.periods[static_cast<size_t>(t - 1)];
    double mined = 0.0, milled = 0.0;

    for (const ExtractionRecord& er : rec.extractions) {
      if (er.unit < 0 || er.unit >= n) {
        out.push_back({"structure", t, "unknown unit " + std::to_string(er.unit), 0.0});
        continue;
      }
      if (!(er.fraction > 0.0) || er.fraction > 1.0 + rel)
        out.push_back({"fraction_bounds", t, "unit " + std::to_string(er.unit), er.fraction});
      unit_fraction[static_cast<size_t>(er.unit)] += er.fraction;
      if (first_period[static_cast<size_t>(er.unit)] == 0) first_period[static_cast<size_t>(er.unit)] = t;
      if (unit_fraction[static_cast<size_t>(er.unit)] >= 1.0 - rel &&
          complete_period[static_cast<size_t>(er.unit)] == 0)
        complete_period[static_cast<size_t>(er.unit)] = t;
      mined += er.tonnes;
      for (const BlockParcel& bp : er.parcels) {
        milled += bp.to_mill;
        block_stocked[bp.block] += bp.to_stockpile;
      }
    }
    for (const ReclaimRecord& r : rec.reclaims) {
      milled += r.tonnes;
      block_reclaimed[r.block] += r.tonnes;
    }

    if (t <= calendar.t_max()) {
      const double m_cap = calendar.period(t).mining_capacity;
      const double p_cap = calendar.period(t).plant_capacity;
      if (mined > m_cap * (1.0 + rel) + 1e-6)
        out.push_back({"mining_capacity", t, "period total", mined - m_cap});
      if (milled > p_cap * (1.0 + rel) + 1e-6)
        out.push_back({"plant_capacity", t, "period total", milled - p_cap});
    } else {
      out.push_back({"structure", t, "period outside the calendar", 0.0});
    }
  }

  // Eq (2) lifted to units: a unit is mined at most once in total.
  for (int u = 0; u < n; ++u)
    if (unit_fraction[static_cast<size_t>(u)] > 1.0 + rel)
      out.push_back({"destination_uniqueness", 0, "unit " + std::to_string(u),
                     unit_fraction[static_cast<size_t>(u)] - 1.0});

  for (const auto& [block, reclaimed] : block_reclaimed) {
    const auto it = block_stocked.find(block);
    const double stocked = it == block_stocked.end() ? 0.0 : it->second;
    if (reclaimed > stocked * (1.0 + rel) + 1e-6)
      out.push_back({"stockpile_balance", 0, "block " + std::to_string(block), reclaimed - stocked});
  }

  for (const auto& [from, to] : units.precedence.arcs) {
    const int f_to = first_period[static_cast<size_t>(to)];
    if (f_to == 0) continue;  // successor untouched
    const int f_from = first_period[static_cast<size_t>(from)];
    if (f_from == 0 || f_to < f_from)
      out.push_back({"precedence", f_to,
                     "unit " + std::to_string(to) + " started before unit " + std::to_string(from), 0.0});
    const int c_to = complete_period[static_cast<size_t>(to)];
    if (c_to != 0) {
      const int c_from = complete_period[static_cast<size_t>(from)];
      if (c_from == 0 || c_to < c_from)
        out.push_back({"precedence", c_to,
                       "unit " + std::to_string(to) + " completed before unit " + std::to_string(from),
                       0.0});
    }
  }
  return out;
}

void save_schedule(const Schedule& schedule, const UnitGraph& units, const std::string& path) {
  auto out = detail::open_out(path);
  out << "# stockpiling = " << (schedule.stockpiling ? "on" : "off") << "\n";
  out << "period,unit_stage,unit_bench,fraction,tonnes_mined,tonnes_milled,tonnes_wasted,"
         "tonnes_stockpiled,tonnes_reclaimed,cashflow\n";

  std::map<int, int> unit_of_block;
  for (size_t u = 0; u < units.units.size(); ++u)
    for (int b : units.units[u].blocks) unit_of_block[b] = static_cast<int>(u);

  for (int t = 1; t <= schedule.t_max(); ++t) {
    const PeriodRecord& rec = schedule.periods[static_cast<size_t>(t - 1)];
    struct RowData {
      int unit = 0;
      double fraction = 0, mined = 0, milled = 0, wasted = 0, stockpiled = 0, reclaimed = 0, cash = 0;
    };
    // Rows keep the extraction order so a reloaded plan replays identically;
    // reclaim-only rows (fraction 0) follow, attributed to the source unit.
    std::vector<RowData> rows;
    std::map<int, size_t> row_of_unit;
    auto row_for = [&](int unit_id) -> RowData& {
      const auto it = row_of_unit.find(unit_id);
      if (it != row_of_unit.end()) return rows[it->second];
      row_of_unit[unit_id] = rows.size();
      rows.push_back({});
      rows.back().unit = unit_id;
      return rows.back();
    };
    for (const ExtractionRecord& er : rec.extractions) {
      RowData& r = row_for(er.unit);
      r.fraction += er.fraction;
      r.mined += er.tonnes;
      r.cash += er.cashflow;
      for (const BlockParcel& bp : er.parcels) {
        r.milled += bp.to_mill;
        r.wasted += bp.to_waste;
        r.stockpiled += bp.to_stockpile;
      }
    }
    for (const ReclaimRecord& rc : rec.reclaims) {
      RowData& r = row_for(unit_of_block.at(rc.block));
      r.reclaimed += rc.tonnes;
      r.cash += rc.cashflow;
    }
    for (const RowData& r : rows)
      out << t << ',' << units.units[static_cast<size_t>(r.unit)].stage << ','
          << units.units[static_cast<size_t>(r.unit)].bench << ',' << detail::fmt(r.fraction) << ','
          << detail::fmt(r.mined) << ',' << detail::fmt(r.milled) << ',' << detail::fmt(r.wasted) << ','
          << detail::fmt(r.stockpiled) << ',' << detail::fmt(r.reclaimed) << ',' << detail::fmt(r.cash)
          << "\n";
  }
}

LoadedSchedule load_schedule(const std::string& path, const UnitGraph& units) {
  detail::LineReader reader(path);
  LoadedSchedule loaded;
  std::string line;
  bool saw_header = false;
  while (reader.next_raw(line)) {
    if (line.front() == '#') {
      std::string_view body = detail::trim(std::string_view(line).substr(1));
      const size_t eq = body.find('=');
      if (eq != std::string_view::npos &&
          detail::trim(body.substr(0, eq)) == std::string_view("stockpiling"))
        loaded.stockpiling = detail::trim(body.substr(eq + 1)) == std::string_view("on");
      continue;
    }
    if (!saw_header) {
      if (line.rfind("period,unit_stage,unit_bench,fraction", 0) != 0)
        detail::parse_fail(path, reader.line_no(), "unexpected schedule header");
      saw_header = true;
      continue;
    }
    auto f = detail::split(line, ',');
    if (f.size() != 10)
      detail::parse_fail(path, reader.line_no(), "expected 10 fields, got " + std::to_string(f.size()));
    const int period = static_cast<int>(detail::to_long(f[0], path, reader.line_no(), "period"));
    const int stage = static_cast<int>(detail::to_long(f[1], path, reader.line_no(), "unit_stage"));
    const int bench = static_cast<int>(detail::to_long(f[2], path, reader.line_no(), "unit_bench"));
    const double fraction = detail::to_double(f[3], path, reader.line_no(), "fraction");
    if (fraction <= 0.0) continue;  // reclaim-only row carries no mining
    const int unit = units.unit_id(stage, bench);
    if (unit < 0)
      detail::parse_fail(path, reader.line_no(),
                         "no unit for stage " + std::to_string(stage) + " bench " + std::to_string(bench));
    loaded.plan.push_back({period, unit, fraction});
  }
  if (!saw_header) throw std::runtime_error(path + ": empty schedule file");
  return loaded;
}

void save_chromosome(const Chromosome& chromosome, const std::string& path) {
  auto out = detail::open_out(path);
  for (int u : chromosome) out << u << "\n";
}

Chromosome load_chromosome(const std::string& path) {
  detail::LineReader reader(path);
  Chromosome c;
  std::string line;
  while (reader.next(line))
    c.push_back(static_cast<int>(detail::to_long(line, path, reader.line_no(), "unit id")));
  return c;
}

}  // namespace pitplan
