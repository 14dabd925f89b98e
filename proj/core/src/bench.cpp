#include "rootgraph/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <stdexcept>

#include "rootgraph/errors.hpp"

namespace rootgraph {

std::string_view to_string(Shape s) { return s == Shape::degenerate ? "degenerate" : "balanced"; }

std::string_view to_string(BenchOp op) {
  switch (op) {
    case BenchOp::insert: return "insert";
    case BenchOp::search: return "search";
    case BenchOp::remove: return "delete";
    case BenchOp::triple: return "triple";
  }
  return "?";
}

std::optional<Shape> parse_shape(std::string_view text) {
  if (text == "degenerate") return Shape::degenerate;
  if (text == "balanced") return Shape::balanced;
  return std::nullopt;
}

std::optional<BenchOp> parse_bench_op(std::string_view text) {
  if (text == "insert") return BenchOp::insert;
  if (text == "search") return BenchOp::search;
  if (text == "delete") return BenchOp::remove;
  if (text == "triple") return BenchOp::triple;
  return std::nullopt;
}

OpScript gen_degenerate(std::size_t n) {
  if (n == 0) throw std::invalid_argument("degenerate tree needs n >= 1");
  OpScript ops;
  ops.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) ops.push_back({OpKind::insert, static_cast<Int>(k)});
  return ops;
}

OpScript gen_balanced(unsigned h) {
  if (h == 0 || h > 30) throw std::invalid_argument("balanced tree needs 1 <= h <= 30");
  OpScript ops;
  std::deque<std::pair<Int, Int>> queue{{1, (Int{1} << h) - 1}};
  while (!queue.empty()) {
    auto [lo, hi] = queue.front();
    queue.pop_front();
    if (lo > hi) continue;
    const Int mid = lo + (hi - lo) / 2;
    ops.push_back({OpKind::insert, mid});
    queue.emplace_back(lo, mid - 1);
    queue.emplace_back(mid + 1, hi);
  }
  return ops;
}

namespace {

std::optional<unsigned> perfect_height(std::size_t n) {
  for (unsigned h = 1; h <= 30; ++h) {
    if ((std::size_t{1} << h) - 1 == n) return h;
  }
  return std::nullopt;
}

}  // namespace

BenchCase make_case(Shape shape, std::size_t n, BenchOp op) {
  BenchCase c;
  c.shape = shape;
  c.n = n;
  c.op = op;
  Int fresh = 0;
  Int deep = 0;
  Int last = 0;
  if (shape == Shape::degenerate) {
    c.prefix = gen_degenerate(n);
    fresh = static_cast<Int>(n) + 1;
    deep = static_cast<Int>(n);
    last = static_cast<Int>(n);
  } else {
    auto h = perfect_height(n);
    if (!h) throw std::invalid_argument("balanced size " + std::to_string(n) + " is not 2^h - 1");
    c.prefix = gen_balanced(*h);
    fresh = Int{1} << *h;
    deep = 1;
    last = fresh - 1;
  }
  switch (op) {
    case BenchOp::insert: c.measured = {{OpKind::insert, fresh}}; break;
    case BenchOp::search: c.measured = {{OpKind::search, deep}}; break;
    case BenchOp::remove: c.measured = {{OpKind::remove, last}}; break;
    case BenchOp::triple:
      c.measured = {{OpKind::insert, fresh}, {OpKind::search, fresh}, {OpKind::remove, fresh}};
      break;
  }
  c.graph = build_prepared_graph(c.prefix, c.measured);
  return c;
}

namespace {

// Counters of the first rep plus the timing samples of every rep.
struct CaseRun {
  const BenchCase* c = nullptr;
  BenchRow row;
  std::vector<double> samples;
};

void run_once(CaseRun& cr, const Program& p, const Command& entry, const std::vector<std::size_t>& go_rules) {
  HostGraph g = cr.c->graph;
  const auto t0 = std::chrono::steady_clock::now();
  RunResult r = run_command(p, entry, g);
  const auto t1 = std::chrono::steady_clock::now();
  cr.samples.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
  if (r.status != ExecStatus::success) throw EngineFault("benchmark op did not succeed");

  BenchRow& row = cr.row;
  std::uint64_t go = 0;
  for (std::size_t k : go_rules) go += r.rule_applications[k];
  if (cr.samples.size() == 1) {
    row.rule_apps = r.stats.applications;
    row.anchors_tried = r.stats.anchors_tried;
    row.go_apps = go;
    row.find_calls = r.stats.find_calls;
    row.extension_steps = r.stats.extension_steps;
    row.max_anchors_per_call = r.stats.max_anchors_per_call;
    row.max_extension_per_call = r.stats.max_extension_per_call;
  } else if (row.rule_apps != r.stats.applications || row.anchors_tried != r.stats.anchors_tried ||
             row.go_apps != go || row.extension_steps != r.stats.extension_steps) {
    row.counters_stable = false;
  }
}

}  // namespace

std::vector<BenchRow> measure_cases(const std::vector<BenchCase>& cases, std::size_t reps,
                                    BstVariant variant) {
  if (reps == 0) throw std::invalid_argument("reps must be >= 1");
  const Program& p = program(variant);
  const Command& entry = resume_command(variant);
  std::vector<std::size_t> go_rules;
  for (const char* name : {"go_right1", "go_left1", "go_left2", "go_right2"}) {
    go_rules.push_back(*p.find_rule(name));
  }
  std::vector<CaseRun> runs(cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    runs[i].c = &cases[i];
    runs[i].row.shape = cases[i].shape;
    runs[i].row.n = cases[i].n;
    runs[i].row.op = cases[i].op;
    runs[i].row.reps = reps;
    runs[i].samples.reserve(reps);
  }
  // Round-robin over the cases so slow drift in machine speed hits every size alike.
  for (std::size_t rep = 0; rep < reps; ++rep) {
    for (auto& cr : runs) run_once(cr, p, entry, go_rules);
  }
  std::vector<BenchRow> rows;
  for (auto& cr : runs) {
    BenchRow& row = cr.row;
    double sum = 0;
    for (double s : cr.samples) sum += s;
    row.mean_ns = sum / static_cast<double>(reps);
    double sq = 0;
    for (double s : cr.samples) sq += (s - row.mean_ns) * (s - row.mean_ns);
    row.stddev_ns = reps > 1 ? std::sqrt(sq / static_cast<double>(reps - 1)) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

BenchRow measure_case(const BenchCase& c, std::size_t reps, BstVariant variant) {
  return measure_cases({c}, reps, variant).front();
}

std::vector<BenchRow> measure(Shape shape, const std::vector<std::size_t>& sizes,
                              std::size_t reps, BstVariant variant,
                              const std::vector<BenchOp>& ops) {
  std::vector<BenchRow> rows;
  for (BenchOp op : ops) {
    std::vector<BenchCase> cases;
    for (std::size_t n : sizes) cases.push_back(make_case(shape, n, op));
    for (auto& r : measure_cases(cases, reps, variant)) rows.push_back(r);
  }
  return rows;
}

std::string to_csv(const std::vector<BenchRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%zu,%s,%zu,%.1f,%.1f,%llu,%llu\n",
                  std::string(to_string(r.shape)).c_str(), r.n,
                  std::string(to_string(r.op)).c_str(), r.reps, r.mean_ns, r.stddev_ns,
                  static_cast<unsigned long long>(r.rule_apps),
                  static_cast<unsigned long long>(r.anchors_tried));
    out += buf;
  }
  return out;
}

double linear_r2(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (syy == 0) return 1.0;
  if (sxx == 0) return 0.0;
  return (sxy * sxy) / (sxx * syy);
}

ScalingReport scaling_report(const std::vector<BenchRow>& rows) {
  std::map<std::pair<Shape, BenchOp>, std::vector<const BenchRow*>> groups;
  for (const auto& r : rows) groups[{r.shape, r.op}].push_back(&r);
  if (groups.empty()) throw std::invalid_argument("no benchmark rows");

  ScalingReport report;
  report.csv = to_csv(rows);
  for (auto& [key, group] : groups) {
    std::sort(group.begin(), group.end(),
              [](const BenchRow* a, const BenchRow* b) { return a->n < b->n; });
    if (group.size() < 4) {
      throw std::invalid_argument("scaling report needs at least 4 sizes per series, got " +
                                  std::to_string(group.size()));
    }
    const double step = static_cast<double>(group[1]->n) / static_cast<double>(group[0]->n);
    if (step < 1.5) throw std::invalid_argument("sizes are not in geometric progression");
    for (std::size_t i = 1; i + 1 < group.size(); ++i) {
      const double s = static_cast<double>(group[i + 1]->n) / static_cast<double>(group[i]->n);
      if (std::abs(s - step) > 0.1 * step) {
        throw std::invalid_argument("sizes are not in geometric progression");
      }
    }

    SeriesReport s;
    s.shape = key.first;
    s.op = key.second;
    std::vector<double> xs, ys;
    for (const BenchRow* r : group) {
      s.sizes.push_back(r->n);
      xs.push_back(static_cast<double>(r->n));
      ys.push_back(static_cast<double>(r->rule_apps));
    }
    for (std::size_t i = 0; i + 1 < group.size(); ++i) {
      s.time_ratios.push_back(group[i + 1]->mean_ns / group[i]->mean_ns);
      s.apps_ratios.push_back(static_cast<double>(group[i + 1]->rule_apps) /
                              static_cast<double>(group[i]->rule_apps));
      s.apps_increments.push_back(static_cast<std::int64_t>(group[i + 1]->rule_apps) -
                                  static_cast<std::int64_t>(group[i]->rule_apps));
    }
    s.apps_r2 = linear_r2(xs, ys);
    if (s.shape == Shape::degenerate) {
      s.apps_pass = std::all_of(s.apps_ratios.begin(), s.apps_ratios.end(), [&](double r) {
        return std::abs(r - step) <= 0.05 * step / 2.0;
      });
      s.time_pass = std::all_of(s.time_ratios.begin(), s.time_ratios.end(), [&](double r) {
        return r >= 1.5 * step / 2.0 && r <= 3.0 * step / 2.0;
      });
    } else {
      s.apps_pass = std::all_of(s.apps_increments.begin(), s.apps_increments.end(),
                                [](std::int64_t d) { return d >= 0 && d <= 8; });
      s.time_pass = group.back()->mean_ns / group.front()->mean_ns <= 4.0;
    }
    report.series.push_back(std::move(s));
  }
  return report;
}

bool ScalingReport::pass() const {
  return std::all_of(series.begin(), series.end(),
                     [](const SeriesReport& s) { return s.apps_pass && s.time_pass; });
}

std::string ScalingReport::to_string() const {
  std::string out;
  char buf[128];
  auto join = [&](const auto& values, const char* fmt) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i > 0) s += ' ';
      std::snprintf(buf, sizeof buf, fmt, values[i]);
      s += buf;
    }
    return s;
  };
  for (const auto& s : series) {
    out += std::string(rootgraph::to_string(s.shape)) + " " + std::string(rootgraph::to_string(s.op)) +
           ":\n";
    out += "  time ratios: " + join(s.time_ratios, "%.3f") + "\n";
    out += "  rule_apps ratios: " + join(s.apps_ratios, "%.4f") + "\n";
    std::vector<long long> inc(s.apps_increments.begin(), s.apps_increments.end());
    out += "  rule_apps increments: " + join(inc, "%lld") + "\n";
    std::snprintf(buf, sizeof buf, "  rule_apps linear R^2: %.6f\n", s.apps_r2);
    out += buf;
    out += std::string("  rule_apps: ") + (s.apps_pass ? "pass" : "FAIL") +
           ", time: " + (s.time_pass ? "pass" : "FAIL") + "\n";
  }
  out += std::string("overall: ") + (pass() ? "pass" : "FAIL") + "\n";
  return out;
}

}  // namespace rootgraph
