#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rootgraph/bst.hpp"
#include "rootgraph/text.hpp"

namespace rootgraph {

enum class Shape : std::uint8_t { degenerate, balanced };
/// Measured operation. `triple` is insert, search, then delete of one fresh leaf key.
enum class BenchOp : std::uint8_t { insert, search, remove, triple };

std::string_view to_string(Shape s);
std::string_view to_string(BenchOp op);
std::optional<Shape> parse_shape(std::string_view text);
std::optional<BenchOp> parse_bench_op(std::string_view text);

/// Inserts of 1..n ascending: a right spine.
OpScript gen_degenerate(std::size_t n);
/// The 2^h - 1 keys 1..2^h-1 of a perfect tree in breadth-first order.
OpScript gen_balanced(unsigned h);

/// Prefix graph plus the ops to time. Degenerate trees of size n measure insert n+1,
/// search n, or delete n. Perfect trees of height h measure search of key 1 (deepest
/// leftmost leaf), insert/delete of 2^h, or the triple on 2^h.
struct BenchCase {
  Shape shape = Shape::degenerate;
  std::size_t n = 0;
  BenchOp op = BenchOp::insert;
  OpScript prefix;
  OpScript measured;
  HostGraph graph;
};

BenchCase make_case(Shape shape, std::size_t n, BenchOp op);

struct BenchRow {
  Shape shape = Shape::degenerate;
  std::size_t n = 0;
  BenchOp op = BenchOp::insert;
  std::size_t reps = 0;
  double mean_ns = 0;
  double stddev_ns = 0;
  std::uint64_t rule_apps = 0;
  std::uint64_t anchors_tried = 0;

  // Not part of the CSV.
  std::uint64_t go_apps = 0;  // go_right1/go_left1/go_left2/go_right2
  std::uint64_t find_calls = 0;
  std::uint64_t extension_steps = 0;
  std::uint64_t max_anchors_per_call = 0;
  std::uint64_t max_extension_per_call = 0;
  bool counters_stable = true;  // identical counters on every rep
};

inline constexpr std::size_t kDefaultReps = 300;

/// Times `reps` runs of the measured op, each on a fresh copy of the prepared graph.
BenchRow measure_case(const BenchCase& c, std::size_t reps, BstVariant variant);

/// Times several cases together, rep by rep in turn, so that drift in machine speed
/// affects every case equally. Rows come back in the order of `cases`.
std::vector<BenchRow> measure_cases(const std::vector<BenchCase>& cases, std::size_t reps,
                                    BstVariant variant);
/// Interleaves the sizes of each op as measure_cases does.
/// Perfect-tree sizes must be of the form 2^h - 1.
std::vector<BenchRow> measure(Shape shape, const std::vector<std::size_t>& sizes,
                              std::size_t reps, BstVariant variant,
                              const std::vector<BenchOp>& ops);

inline constexpr std::string_view kCsvHeader =
    "shape,n,op,reps,mean_ns,stddev_ns,rule_apps,anchors_tried";

std::string to_csv(const std::vector<BenchRow>& rows);

struct SeriesReport {
  Shape shape = Shape::degenerate;
  BenchOp op = BenchOp::insert;
  std::vector<std::size_t> sizes;
  std::vector<double> time_ratios;  // mean_ns[i+1] / mean_ns[i]
  std::vector<double> apps_ratios;  // rule_apps[i+1] / rule_apps[i]
  std::vector<std::int64_t> apps_increments;
  double apps_r2 = 0;  // linear fit of rule_apps against n
  bool apps_pass = false;
  bool time_pass = false;
};

struct ScalingReport {
  std::vector<SeriesReport> series;
  std::string csv;
  bool pass() const;
  std::string to_string() const;
};

/// Groups rows by (shape, op); each group needs at least 4 sizes in geometric
/// progression. Throws std::invalid_argument otherwise.
/// Degenerate: apps doubling ratio within 2 +- 0.05, time ratio in [1.5, 3].
/// Balanced: apps grow by at most 8 per size step, last/first time ratio <= 4.
ScalingReport scaling_report(const std::vector<BenchRow>& rows);

/// Coefficient of determination of the least-squares line through (x, y).
double linear_r2(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rootgraph
