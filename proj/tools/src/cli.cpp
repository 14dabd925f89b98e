#include "rootgraph_tools/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rootgraph/bench.hpp"
#include "rootgraph/bst.hpp"
#include "rootgraph/errors.hpp"
#include "rootgraph/oracle.hpp"
#include "rootgraph/text.hpp"

namespace rootgraph::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::uint64_t loop_cap(std::uint64_t flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("RG_MAX_ITERS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) throw UsageError("RG_MAX_ITERS must be a positive integer");
    return v;
  }
  return RunOptions{}.max_loop_iterations;
}

void print_stats(std::ostream& os, const MatchStats& s) {
  os << "find_calls " << s.find_calls << "\n"
     << "anchors_tried " << s.anchors_tried << "\n"
     << "extension_steps " << s.extension_steps << "\n"
     << "matches_found " << s.matches_found << "\n"
     << "applications " << s.applications << "\n"
     << "max_anchors_per_call " << s.max_anchors_per_call << "\n"
     << "max_extension_per_call " << s.max_extension_per_call << "\n";
}

BstVariant variant_or_throw(const std::string& name, std::ostream& err) {
  auto v = parse_variant(name);
  if (!v) throw UsageError("unknown variant '" + name + "' (faithful or sanitized)");
  if (*v == BstVariant::faithful) {
    err << "warning: the faithful variant runs the original program, which leaves stale "
           "roots after match and delete; results are only reliable on faithful-safe scripts "
           "(see docs/formats.md)\n";
  }
  return *v;
}

// `1000,2000` or `h=6..12` (perfect-tree heights, converted to sizes 2^h - 1).
std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  auto to_num = [&](const std::string& s) -> std::size_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("bad size '" + s + "'");
    }
    return std::stoull(s);
  };
  if (text.rfind("h=", 0) == 0) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) throw UsageError("height range must look like h=6..12");
    const std::size_t lo = to_num(text.substr(2, dots - 2));
    const std::size_t hi = to_num(text.substr(dots + 2));
    if (lo < 1 || hi > 30 || lo > hi) throw UsageError("height range out of bounds");
    for (std::size_t h = lo; h <= hi; ++h) sizes.push_back((std::size_t{1} << h) - 1);
    return sizes;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) sizes.push_back(to_num(item));
  if (sizes.empty()) throw UsageError("no sizes given");
  return sizes;
}

int cmd_run(const std::string& program_path, const std::string& host_path, std::uint64_t max_iters,
            bool trace, bool stats, std::ostream& out, std::ostream& err) {
  Program p = parse_program(read_file(program_path));
  const std::string host_text = read_file(host_path);
  HostGraph g = ends_with(host_path, ".ops") ? build_instruction_graph(parse_opscript(host_text))
                                             : parse_host(host_text);
  RunOptions opts;
  opts.max_loop_iterations = loop_cap(max_iters);
  opts.record_trace = trace;
  RunResult r;
  try {
    r = run(p, g, opts);
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kProgramFailed;
  }
  out << print_host(g);
  if (trace) {
    out << "trace:";
    for (std::size_t i : r.trace) out << ' ' << p.rules[i].name;
    out << "\n";
  }
  if (stats) print_stats(out, r.stats);
  if (r.status == ExecStatus::failure) {
    err << "program failed\n";
    return kProgramFailed;
  }
  return kOk;
}

int cmd_bst(const std::string& ops_path, const std::string& variant_name, const std::string& print,
            std::ostream& out, std::ostream& err) {
  const BstVariant v = variant_or_throw(variant_name, err);
  const OpScript ops = parse_opscript(read_file(ops_path));
  const BstRunResult r = run_bst(ops, v);
  if (print == "graph") {
    out << print_host(r.graph);
  } else if (print == "tree") {
    if (r.tree_error) {
      err << "error: " << *r.tree_error << "\n";
      return kMismatch;
    }
    out << r.tree.to_string() << "\n";
  } else {
    const OutputReport report = validate_output(r.graph, ops);
    out << report.to_string();
    if (!report.ok()) return kMismatch;
  }
  return r.status == ExecStatus::failure ? kProgramFailed : kOk;
}

int cmd_check(std::size_t seeds, std::uint64_t first_seed, std::size_t size,
              const std::string& constraints_name, const std::string& variant_name,
              const std::string& program_path, std::ostream& out, std::ostream& err) {
  auto constraints = parse_constraints(constraints_name);
  if (!constraints) throw UsageError("unknown constraints '" + constraints_name + "'");
  const BstVariant v = variant_or_throw(variant_name, err);
  if (v == BstVariant::faithful && *constraints != Constraints::faithful_safe) {
    throw UsageError("the faithful variant only supports faithful-safe workloads");
  }
  Program custom;
  if (!program_path.empty()) custom = parse_program(read_file(program_path));
  const Program& p = program_path.empty() ? program(v) : custom;

  for (std::size_t i = 0; i < seeds; ++i) {
    const std::uint64_t seed = first_seed + i;
    OpScript ops;
    try {
      ops = gen_workload(seed, size, *constraints);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (auto problem = differential_check(ops, p)) {
      const OpScript small = minimize_counterexample(ops, p, *constraints);
      const auto reason = differential_check(small, p);
      out << "mismatch at seed " << seed << ": " << *problem << "\n";
      out << "minimized counterexample (" << small.size() << " ops): "
          << reason.value_or(*problem) << "\n";
      out << print_opscript(small);
      return kMismatch;
    }
  }
  out << "ok: " << seeds << " workloads of " << size << " ops (" << to_string(*constraints)
      << ", " << to_string(v) << ")\n";
  return kOk;
}

int cmd_bench(const std::string& shape_name, const std::string& sizes_text, std::size_t reps,
              const std::string& variant_name, const std::string& out_path,
              const std::vector<std::string>& op_names, std::ostream& out, std::ostream& err) {
  auto shape = parse_shape(shape_name);
  if (!shape) throw UsageError("unknown shape '" + shape_name + "'");
  const BstVariant v = variant_or_throw(variant_name, err);
  const auto sizes = parse_sizes(sizes_text);
  if (sizes.size() < 4) throw UsageError("the scaling report needs at least 4 sizes");
  if (reps == 0) throw UsageError("reps must be >= 1");
  std::vector<BenchOp> ops;
  for (const auto& name : op_names) {
    auto op = parse_bench_op(name);
    if (!op) throw UsageError("unknown op '" + name + "'");
    ops.push_back(*op);
  }
  if (ops.empty()) {
    if (*shape == Shape::degenerate) {
      ops = {BenchOp::insert, BenchOp::search, BenchOp::remove};
    } else {
      ops = {BenchOp::triple};
    }
  }
  std::vector<BenchRow> rows;
  ScalingReport report;
  try {
    rows = measure(*shape, sizes, reps, v, ops);
    report = scaling_report(rows);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (out_path.empty()) {
    out << report.csv;
    err << report.to_string();
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + out_path);
    f << report.csv;
    out << report.to_string();
  }
  return kOk;
}

int cmd_validate(const std::string& program_path, std::ostream& out, std::ostream& err) {
  Program p = parse_program_unchecked(read_file(program_path));
  const ProgramDiagnostics d = validate_program(p);
  for (const auto& w : d.warnings) err << "warning: " << w << "\n";
  for (const auto& e : d.errors) err << "error: " << e << "\n";
  if (!d.ok()) return kMismatch;
  out << p.rules.size() << " rules, " << p.procedures.size() << " procedures\n";
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rooted graph programs and the bst program", "rootgraph"};
  app.require_subcommand(1);

  std::string program_path, host_path, ops_path, out_path, print = "tree";
  std::string variant = "sanitized", constraints = "sanitized-safe", shape = "degenerate";
  std::string sizes_text;
  std::uint64_t max_iters = 0, first_seed = 1;
  std::size_t seeds = 100, size = 300, reps = kDefaultReps;
  bool trace = false, stats = false;
  std::vector<std::string> bench_ops;

  auto* run_cmd = app.add_subcommand("run", "Run a program on a host graph (.host) or op script (.ops)");
  run_cmd->add_option("program", program_path, "Program file (.gp2)")->required();
  run_cmd->add_option("host", host_path, "Host graph (.host) or op script (.ops)")->required();
  run_cmd->add_option("--max-iters", max_iters, "Iteration cap per loop execution");
  run_cmd->add_flag("--trace", trace, "Print the applied rules in order");
  run_cmd->add_flag("--stats", stats, "Print matching counters");

  auto* bst_cmd = app.add_subcommand("bst", "Run the bundled bst program on an op script");
  bst_cmd->add_option("ops", ops_path, "Op script (.ops)")->required();
  bst_cmd->add_option("--variant", variant, "faithful or sanitized")->capture_default_str();
  bst_cmd->add_option("--print", print, "graph, tree or report")
      ->check(CLI::IsMember({"graph", "tree", "report"}))
      ->capture_default_str();

  auto* check_cmd = app.add_subcommand("check", "Differential test against the reference tree");
  check_cmd->add_option("--seeds", seeds, "Number of workloads")->capture_default_str();
  check_cmd->add_option("--first-seed", first_seed, "Seed of the first workload")->capture_default_str();
  check_cmd->add_option("--size", size, "Ops per workload")->capture_default_str();
  check_cmd->add_option("--constraints", constraints,
                        "sanitized-safe, faithful-safe or unrestricted")->capture_default_str();
  check_cmd->add_option("--variant", variant, "faithful or sanitized")->capture_default_str();
  check_cmd->add_option("--program", program_path, "Check this program instead of the bundled one");

  auto* bench_cmd = app.add_subcommand("bench", "Time single operations and report scaling");
  bench_cmd->add_option("--shape", shape, "degenerate or balanced")->capture_default_str();
  bench_cmd->add_option("--sizes", sizes_text, "Tree sizes (1000,2000,...) or heights (h=6..12)")
      ->required();
  bench_cmd->add_option("--reps", reps, "Timed runs per size")->capture_default_str();
  bench_cmd->add_option("--variant", variant, "faithful or sanitized")->capture_default_str();
  bench_cmd->add_option("--out", out_path, "Write the CSV here instead of stdout");
  bench_cmd->add_option("--ops", bench_ops, "insert, search, delete, triple")->delimiter(',');

  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a program");
  validate_cmd->add_option("program", program_path, "Program file (.gp2)")->required();

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("rootgraph");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(program_path, host_path, max_iters, trace, stats, out, err);
    if (bst_cmd->parsed()) return cmd_bst(ops_path, variant, print, out, err);
    if (check_cmd->parsed()) {
      return cmd_check(seeds, first_seed, size, constraints, variant, program_path, out, err);
    }
    if (bench_cmd->parsed()) {
      return cmd_bench(shape, sizes_text, reps, variant, out_path, bench_ops, out, err);
    }
    if (validate_cmd->parsed()) return cmd_validate(program_path, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kMismatch;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kProgramFailed;
  }
  return kUsage;
}

}  // namespace rootgraph::cli
