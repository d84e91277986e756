#include "rlvr/counting.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <unordered_set>

#include "rlvr/problem.hpp"
#include "rlvr/rng.hpp"

namespace rlvr::counting {

namespace {

struct StepName {
  StepKind kind;
  std::string_view name;
};

constexpr StepName kStepNames[] = {
    {StepKind::KeepEven, "keep_even"},
    {StepKind::KeepOdd, "keep_odd"},
    {StepKind::KeepPositive, "keep_positive"},
    {StepKind::KeepNegative, "keep_negative"},
    {StepKind::KeepDivisibleBy, "keep_divisible_by"},
    {StepKind::KeepBelow, "keep_below"},
    {StepKind::KeepAbove, "keep_above"},
    {StepKind::AddConstant, "add_constant"},
    {StepKind::MultiplyConstant, "multiply_constant"},
    {StepKind::Negate, "negate"},
    {StepKind::Square, "square"},
    {StepKind::AbsoluteValue, "absolute_value"},
    {StepKind::ModuloConstant, "modulo_constant"},
};

constexpr std::string_view kAggregateNames[] = {
    "count",      "unique_count", "zero_count", "even_count",  "odd_count",   "positive_count",
    "negative_count", "divisible_by_n_count", "below_threshold_count", "above_threshold_count", "sum",
    "product",    "mean",         "median",     "mode",        "min",         "max",
    "range",      "bitwise_and",  "bitwise_or", "bitwise_xor", "bitwise_nand"};

constexpr std::array<StepKind, 7> kFilterKinds = {StepKind::KeepEven,        StepKind::KeepOdd,   StepKind::KeepPositive,
                                     StepKind::KeepNegative,    StepKind::KeepDivisibleBy,
                                     StepKind::KeepBelow,       StepKind::KeepAbove};
constexpr std::array<StepKind, 6> kTransformKinds = {StepKind::AddConstant, StepKind::MultiplyConstant, StepKind::Negate,
                                        StepKind::Square,      StepKind::AbsoluteValue,    StepKind::ModuloConstant};

bool within_limit(__int128 v) noexcept { return v <= kMagnitudeLimit && v >= -kMagnitudeLimit; }

std::int64_t checked(__int128 v) {
  if (!within_limit(v)) throw EvaluationError("value magnitude exceeds 2^62");
  return static_cast<std::int64_t>(v);
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) noexcept {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

bool is_even(std::int64_t v) noexcept { return v % 2 == 0; }

void apply_step(const PipelineStep& step, std::vector<std::int64_t>& values) {
  auto keep = [&](auto pred) { std::erase_if(values, [&](std::int64_t v) { return !pred(v); }); };
  switch (step.kind) {
    case StepKind::KeepEven: keep([](std::int64_t v) { return is_even(v); }); break;
    case StepKind::KeepOdd: keep([](std::int64_t v) { return !is_even(v); }); break;
    case StepKind::KeepPositive: keep([](std::int64_t v) { return v > 0; }); break;
    case StepKind::KeepNegative: keep([](std::int64_t v) { return v < 0; }); break;
    case StepKind::KeepDivisibleBy: keep([&](std::int64_t v) { return v % step.param == 0; }); break;
    case StepKind::KeepBelow: keep([&](std::int64_t v) { return v < step.param; }); break;
    case StepKind::KeepAbove: keep([&](std::int64_t v) { return v > step.param; }); break;
    case StepKind::AddConstant:
      for (auto& v : values) v = checked(static_cast<__int128>(v) + step.param);
      break;
    case StepKind::MultiplyConstant:
      for (auto& v : values) v = checked(static_cast<__int128>(v) * step.param);
      break;
    case StepKind::Negate:
      for (auto& v : values) v = -v;
      break;
    case StepKind::Square:
      for (auto& v : values) v = checked(static_cast<__int128>(v) * v);
      break;
    case StepKind::AbsoluteValue:
      for (auto& v : values) v = v < 0 ? -v : v;
      break;
    case StepKind::ModuloConstant:
      for (auto& v : values) v = floor_mod(v, step.param);
      break;
  }
}

RealScalar two_decimals(const Rational& r) { return RealScalar{static_cast<double>(round_scaled(r, 2)) / 100.0, 2}; }

std::string step_phrase(const PipelineStep& step) {
  const std::string p = std::to_string(step.param);
  switch (step.kind) {
    case StepKind::KeepEven: return "keep only the numbers that are even";
    case StepKind::KeepOdd: return "keep only the numbers that are odd";
    case StepKind::KeepPositive: return "keep only the numbers that are positive (greater than zero)";
    case StepKind::KeepNegative: return "keep only the numbers that are negative (less than zero)";
    case StepKind::KeepDivisibleBy: return "keep only the numbers that are divisible by " + p;
    case StepKind::KeepBelow: return "keep only the numbers that are less than " + p;
    case StepKind::KeepAbove: return "keep only the numbers that are greater than " + p;
    case StepKind::AddConstant:
      return step.param >= 0 ? "add " + p + " to each number"
                             : "subtract " + std::to_string(-step.param) + " from each number";
    case StepKind::MultiplyConstant: return "multiply each number by " + p;
    case StepKind::Negate: return "replace each number with its negation";
    case StepKind::Square: return "replace each number with its square";
    case StepKind::AbsoluteValue: return "replace each number with its absolute value";
    case StepKind::ModuloConstant:
      return "replace each number with its remainder when divided by " + p + " (always between 0 and " +
             std::to_string(step.param - 1) + ")";
  }
  return {};
}

std::string aggregate_phrase(const AggregateOp& op) {
  const std::string p = std::to_string(op.param);
  switch (op.kind) {
    case AggregateKind::Count: return "count how many values remain";
    case AggregateKind::UniqueCount: return "count how many distinct values there are";
    case AggregateKind::ZeroCount: return "count how many values are equal to zero";
    case AggregateKind::EvenCount: return "count how many values are even";
    case AggregateKind::OddCount: return "count how many values are odd";
    case AggregateKind::PositiveCount: return "count how many values are positive (greater than zero)";
    case AggregateKind::NegativeCount: return "count how many values are negative (less than zero)";
    case AggregateKind::DivisibleByNCount: return "count how many values are divisible by " + p;
    case AggregateKind::BelowThresholdCount: return "count how many values are less than " + p;
    case AggregateKind::AboveThresholdCount: return "count how many values are greater than " + p;
    case AggregateKind::Sum: return "compute their sum";
    case AggregateKind::Product: return "compute their product";
    case AggregateKind::Mean: return "compute their mean, rounded to two decimal places";
    case AggregateKind::Median:
      return "compute their median, rounded to two decimal places (with an even number of values, the median is "
             "the mean of the two middle values)";
    case AggregateKind::Mode:
      return "find their mode (the most frequent value; if several values are tied, take the smallest of them)";
    case AggregateKind::Min: return "find the smallest value";
    case AggregateKind::Max: return "find the largest value";
    case AggregateKind::Range: return "compute their range (the largest value minus the smallest value)";
    case AggregateKind::BitwiseAnd: return "compute the bitwise AND of all of them";
    case AggregateKind::BitwiseOr: return "compute the bitwise OR of all of them";
    case AggregateKind::BitwiseXor: return "compute the bitwise XOR of all of them";
    case AggregateKind::BitwiseNand:
      return "compute their bitwise NAND, defined as the bitwise complement of the AND of all values, keeping only "
             "as many low bits as are needed to write the largest value in binary";
  }
  return {};
}

std::string spec_key(const CountingSpec& spec) {
  std::string key = std::to_string(spec.range_lo) + ":" + std::to_string(spec.range_hi);
  for (const auto& s : spec.pipeline) {
    key += "|" + std::to_string(static_cast<int>(s.kind)) + "," + std::to_string(s.param);
  }
  key += "|op" + std::to_string(static_cast<int>(spec.final_op.kind)) + "," + std::to_string(spec.final_op.param);
  return key;
}

constexpr std::int64_t kScaleBounds[4][2] = {{0, 0}, {10, 100}, {100, 1000}, {1000, 10000}};

}  // namespace

int CountingSpec::n_filters() const noexcept {
  return static_cast<int>(std::count_if(pipeline.begin(), pipeline.end(), [](auto& s) { return s.is_filter(); }));
}

int CountingSpec::n_transforms() const noexcept { return static_cast<int>(pipeline.size()) - n_filters(); }

std::string_view to_string(StepKind kind) noexcept {
  for (const auto& entry : kStepNames) {
    if (entry.kind == kind) return entry.name;
  }
  return "unknown";
}

StepKind parse_step_kind(std::string_view text) {
  for (const auto& entry : kStepNames) {
    if (entry.name == text) return entry.kind;
  }
  throw DataError("unknown pipeline step '" + std::string(text) + "'");
}

bool step_has_param(StepKind kind) noexcept {
  return kind == StepKind::KeepDivisibleBy || kind == StepKind::KeepBelow || kind == StepKind::KeepAbove ||
         kind == StepKind::AddConstant || kind == StepKind::MultiplyConstant || kind == StepKind::ModuloConstant;
}

std::string_view to_string(AggregateKind kind) noexcept { return kAggregateNames[static_cast<int>(kind)]; }

AggregateKind parse_aggregate_kind(std::string_view text) {
  for (int i = 0; i < kAggregateKindCount; ++i) {
    if (kAggregateNames[i] == text) return static_cast<AggregateKind>(i);
  }
  throw DataError("unknown aggregate operator '" + std::string(text) + "'");
}

std::vector<AggregateKind> all_aggregate_kinds() {
  std::vector<AggregateKind> kinds;
  for (int i = 0; i < kAggregateKindCount; ++i) kinds.push_back(static_cast<AggregateKind>(i));
  return kinds;
}

int range_scale_of(std::int64_t width) noexcept {
  if (width <= 100) return 1;
  if (width <= 1000) return 2;
  return 3;
}

void validate(const CountingSpec& spec) {
  if (spec.range_lo > spec.range_hi) throw DataError("range_lo must not exceed range_hi");
  if (spec.range_lo < -kMagnitudeLimit || spec.range_hi > kMagnitudeLimit) throw DataError("range out of bounds");
  if (static_cast<__int128>(spec.range_hi) - spec.range_lo >= 1'000'000) {
    throw DataError("range wider than 1,000,000 integers");
  }
  const int filters = spec.n_filters();
  const int transforms = spec.n_transforms();
  if (filters < 1 || filters > 4) throw DataError("pipeline must contain 1-4 filters, got " + std::to_string(filters));
  if (transforms > 3) throw DataError("pipeline must contain 0-3 transforms, got " + std::to_string(transforms));
  for (const auto& step : spec.pipeline) {
    switch (step.kind) {
      case StepKind::KeepDivisibleBy:
      case StepKind::ModuloConstant:
        if (step.param < 2 || step.param > 12) {
          throw DataError(std::string(to_string(step.kind)) + " constant must be in 2..12");
        }
        break;
      case StepKind::AddConstant:
        if (step.param < -20 || step.param > 20) throw DataError("add_constant constant must be in -20..20");
        break;
      case StepKind::MultiplyConstant:
        if (step.param < -20 || step.param > 20 || step.param == 0) {
          throw DataError("multiply_constant constant must be in -20..20 excluding 0");
        }
        break;
      default:
        if (!step_has_param(step.kind) && step.param != 0) {
          throw DataError(std::string(to_string(step.kind)) + " takes no constant");
        }
        break;
    }
  }
  const auto& op = spec.final_op;
  if (op.kind == AggregateKind::DivisibleByNCount && (op.param < 2 || op.param > 12)) {
    throw DataError("divisible_by_n_count constant must be in 2..12");
  }
  if (!op.has_param() && op.param != 0) throw DataError(std::string(to_string(op.kind)) + " takes no constant");
}

std::vector<std::int64_t> run_pipeline(const CountingSpec& spec) {
  if (spec.range_lo > spec.range_hi) throw EvaluationError("empty range");
  std::vector<std::int64_t> values;
  values.reserve(static_cast<std::size_t>(spec.range_hi - spec.range_lo + 1));
  for (std::int64_t v = spec.range_lo;; ++v) {
    values.push_back(v);
    if (v == spec.range_hi) break;
  }
  for (const auto& step : spec.pipeline) apply_step(step, values);
  return values;
}

GroundTruth aggregate(const AggregateOp& op, const std::vector<std::int64_t>& values) {
  if (values.empty()) throw EvaluationError("final multiset is empty");
  auto count_if = [&](auto pred) {
    return GroundTruth{IntScalar{static_cast<std::int64_t>(std::count_if(values.begin(), values.end(), pred))}};
  };
  if (op.is_bitwise() && std::any_of(values.begin(), values.end(), [](std::int64_t v) { return v < 0; })) {
    throw EvaluationError("bitwise operator applied to a negative value");
  }
  switch (op.kind) {
    case AggregateKind::Count: return IntScalar{static_cast<std::int64_t>(values.size())};
    case AggregateKind::UniqueCount: {
      std::vector<std::int64_t> sorted = values;
      std::sort(sorted.begin(), sorted.end());
      return IntScalar{static_cast<std::int64_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin())};
    }
    case AggregateKind::ZeroCount: return count_if([](std::int64_t v) { return v == 0; });
    case AggregateKind::EvenCount: return count_if([](std::int64_t v) { return is_even(v); });
    case AggregateKind::OddCount: return count_if([](std::int64_t v) { return !is_even(v); });
    case AggregateKind::PositiveCount: return count_if([](std::int64_t v) { return v > 0; });
    case AggregateKind::NegativeCount: return count_if([](std::int64_t v) { return v < 0; });
    case AggregateKind::DivisibleByNCount: return count_if([&](std::int64_t v) { return v % op.param == 0; });
    case AggregateKind::BelowThresholdCount: return count_if([&](std::int64_t v) { return v < op.param; });
    case AggregateKind::AboveThresholdCount: return count_if([&](std::int64_t v) { return v > op.param; });
    case AggregateKind::Sum: {
      __int128 sum = 0;
      for (auto v : values) sum += v;
      return IntScalar{checked(sum)};
    }
    case AggregateKind::Product: {
      __int128 product = 1;
      for (auto v : values) {
        product *= v;
        if (product == 0) break;
        checked(product);
      }
      return IntScalar{checked(product)};
    }
    case AggregateKind::Mean: {
      __int128 sum = 0;
      for (auto v : values) sum += v;
      return two_decimals(Rational(checked(sum), static_cast<std::int64_t>(values.size())));
    }
    case AggregateKind::Median: {
      std::vector<std::int64_t> sorted = values;
      std::sort(sorted.begin(), sorted.end());
      const std::size_t mid = sorted.size() / 2;
      if (sorted.size() % 2 == 1) return two_decimals(Rational(sorted[mid]));
      return two_decimals(Rational(checked(static_cast<__int128>(sorted[mid - 1]) + sorted[mid]), 2));
    }
    case AggregateKind::Mode: {
      std::map<std::int64_t, std::size_t> freq;
      for (auto v : values) ++freq[v];
      std::int64_t best = freq.begin()->first;
      std::size_t best_count = 0;
      for (const auto& [value, n] : freq) {
        if (n > best_count) {
          best = value;
          best_count = n;
        }
      }
      return IntScalar{best};
    }
    case AggregateKind::Min: return IntScalar{*std::min_element(values.begin(), values.end())};
    case AggregateKind::Max: return IntScalar{*std::max_element(values.begin(), values.end())};
    case AggregateKind::Range: {
      const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
      return IntScalar{checked(static_cast<__int128>(*hi) - *lo)};
    }
    case AggregateKind::BitwiseAnd:
    case AggregateKind::BitwiseNand: {
      std::uint64_t acc = ~std::uint64_t{0};
      std::uint64_t max_value = 0;
      for (auto v : values) {
        acc &= static_cast<std::uint64_t>(v);
        max_value = std::max(max_value, static_cast<std::uint64_t>(v));
      }
      if (op.kind == AggregateKind::BitwiseAnd) return IntScalar{static_cast<std::int64_t>(acc)};
      const int width = max_value == 0 ? 1 : static_cast<int>(std::bit_width(max_value));
      const std::uint64_t mask = width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
      return IntScalar{static_cast<std::int64_t>(~acc & mask)};
    }
    case AggregateKind::BitwiseOr: {
      std::uint64_t acc = 0;
      for (auto v : values) acc |= static_cast<std::uint64_t>(v);
      return IntScalar{static_cast<std::int64_t>(acc)};
    }
    case AggregateKind::BitwiseXor: {
      std::uint64_t acc = 0;
      for (auto v : values) acc ^= static_cast<std::uint64_t>(v);
      return IntScalar{static_cast<std::int64_t>(acc)};
    }
  }
  throw EvaluationError("unknown aggregate operator");
}

GroundTruth evaluate_counting(const CountingSpec& spec) { return aggregate(spec.final_op, run_pipeline(spec)); }

std::string render_counting_prompt(const CountingSpec& spec) {
  std::string text = "Consider the integers from " + std::to_string(spec.range_lo) + " to " +
                     std::to_string(spec.range_hi) + ", inclusive.";
  for (std::size_t i = 0; i < spec.pipeline.size(); ++i) {
    text += i == 0 ? " First, " : " Then, ";
    text += step_phrase(spec.pipeline[i]) + ".";
  }
  if (spec.n_transforms() > 0) text += " Repeated values are kept and counted separately.";
  text += " Of these numbers, " + aggregate_phrase(spec.final_op) + ".";
  text += "\nProvide your final answer as 'Answer: X'.";
  return text;
}

ProblemInstance make_counting_instance(const CountingSpec& spec, std::uint64_t seed, std::size_t ordinal) {
  validate(spec);
  ProblemInstance instance;
  instance.id = make_instance_id(TaskFamily::Counting, seed, ordinal);
  instance.family = TaskFamily::Counting;
  instance.prompt = render_counting_prompt(spec);
  instance.truth = evaluate_counting(spec);
  instance.spec = spec;
  instance.complexity = complexity_of(instance.spec);
  instance.seed = seed;
  return instance;
}

namespace {

std::optional<CountingSpec> draw_spec(Rng& rng, const CountingConfig& config,
                                      const std::vector<AggregateKind>& whitelist) {
  CountingSpec spec;
  const int scale = static_cast<int>(rng.uniform_int(config.min_range_scale, config.max_range_scale));
  const std::int64_t width = rng.uniform_int(kScaleBounds[scale][0], kScaleBounds[scale][1]);
  spec.range_lo = rng.uniform_int(-width, width);
  spec.range_hi = spec.range_lo + width - 1;

  const int filters = static_cast<int>(rng.uniform_int(config.min_filters, config.max_filters));
  const int transforms = static_cast<int>(rng.uniform_int(config.min_transforms, config.max_transforms));
  std::vector<bool> is_filter(static_cast<std::size_t>(filters), true);
  is_filter.resize(static_cast<std::size_t>(filters + transforms), false);
  std::vector<char> order(is_filter.begin(), is_filter.end());
  rng.shuffle(std::span<char>(order));

  std::vector<std::int64_t> values;
  for (std::int64_t v = spec.range_lo; v <= spec.range_hi; ++v) values.push_back(v);

  auto stage_bounds = [&]() { return std::minmax_element(values.begin(), values.end()); };

  try {
    for (const char filter : order) {
      PipelineStep step;
      if (filter) {
        step.kind = rng.pick(kFilterKinds);
        if (step.kind == StepKind::KeepDivisibleBy) step.param = rng.uniform_int(2, 12);
        if (step.kind == StepKind::KeepBelow || step.kind == StepKind::KeepAbove) {
          const auto [lo, hi] = stage_bounds();
          step.param = rng.uniform_int(*lo, *hi);
        }
      } else {
        step.kind = rng.pick(kTransformKinds);
        if (step.kind == StepKind::AddConstant) {
          do step.param = rng.uniform_int(-20, 20);
          while (step.param == 0);
        } else if (step.kind == StepKind::MultiplyConstant) {
          do step.param = rng.uniform_int(-20, 20);
          while (step.param == 0 || step.param == 1);
        } else if (step.kind == StepKind::ModuloConstant) {
          step.param = rng.uniform_int(2, 12);
        }
      }
      apply_step(step, values);
      spec.pipeline.push_back(step);
      if (values.empty()) return std::nullopt;
    }

    spec.final_op.kind = rng.pick(whitelist);
    if (spec.final_op.kind == AggregateKind::DivisibleByNCount) spec.final_op.param = rng.uniform_int(2, 12);
    if (spec.final_op.kind == AggregateKind::BelowThresholdCount ||
        spec.final_op.kind == AggregateKind::AboveThresholdCount) {
      const auto [lo, hi] = stage_bounds();
      spec.final_op.param = rng.uniform_int(*lo, *hi);
    }
    aggregate(spec.final_op, values);
  } catch (const EvaluationError&) {
    return std::nullopt;
  }
  return spec;
}

}  // namespace

std::vector<ProblemInstance> generate_counting(const CountingConfig& config) {
  if (config.min_range_scale < 1 || config.max_range_scale > 3 || config.min_range_scale > config.max_range_scale) {
    throw ConfigError("range scale bounds must satisfy 1 <= min <= max <= 3");
  }
  if (config.min_filters < 1 || config.max_filters > 4 || config.min_filters > config.max_filters) {
    throw ConfigError("filter bounds must satisfy 1 <= min <= max <= 4");
  }
  if (config.min_transforms < 0 || config.max_transforms > 3 || config.min_transforms > config.max_transforms) {
    throw ConfigError("transform bounds must satisfy 0 <= min <= max <= 3");
  }
  if (config.attempts_per_instance == 0) throw ConfigError("attempt budget must be positive");

  std::vector<ProblemInstance> out;
  if (config.count == 0) return out;
  if (config.pinned) {
    if (config.count > 1) throw ConfigError("a pinned spec yields exactly one unique instance");
    out.push_back(make_counting_instance(*config.pinned, config.seed, 0));
    return out;
  }

  std::vector<AggregateKind> whitelist = config.operator_whitelist;
  if (whitelist.empty()) whitelist = all_aggregate_kinds();

  Rng rng(config.seed);
  std::unordered_set<std::string> seen;
  out.reserve(config.count);
  for (std::size_t ordinal = 0; ordinal < config.count; ++ordinal) {
    bool produced = false;
    for (std::size_t attempt = 0; attempt < config.attempts_per_instance; ++attempt) {
      auto spec = draw_spec(rng, config, whitelist);
      if (!spec) continue;
      if (!seen.insert(spec_key(*spec)).second) continue;
      out.push_back(make_counting_instance(*spec, config.seed, ordinal));
      produced = true;
      break;
    }
    if (!produced) {
      throw GenerationBudgetError("counting generator exhausted " + std::to_string(config.attempts_per_instance) +
                                  " attempts for instance " + std::to_string(ordinal));
    }
  }
  return out;
}

}  // namespace rlvr::counting
