#include "rlvr/parsing.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "json.hpp"

namespace rlvr::parsing {

using Json = nlohmann::json;

namespace {

constexpr std::size_t kMaxJsonCandidates = 64;
constexpr std::size_t kMaxBraceDepth = 64;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), lower);
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

/// Drop markdown emphasis and quote/heading markers.
std::string strip_markup(std::string_view line) {
  std::string out;
  for (char c : line)
    if (c != '*' && c != '_' && c != '`') out += c;
  std::string_view view = trim(out);
  while (!view.empty() && (view.front() == '#' || view.front() == '>')) view = trim(view.substr(1));
  return std::string(view);
}

/// Number at the very end of `s` after optional whitespace, allowing a
/// trailing period.
std::optional<GroundTruth> number_payload(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.back() == '.') s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '$' && s.back() == '$') s = trim(s.substr(1, s.size() - 2));
  return parse_number(s);
}

/// Value inside the last \boxed{...} on the line.
std::optional<GroundTruth> boxed_value(std::string_view line) {
  const auto pos = line.rfind("\\boxed{");
  if (pos == std::string_view::npos) return std::nullopt;
  const auto open = pos + 7;
  const auto close = line.find('}', open);
  if (close == std::string_view::npos) return std::nullopt;
  return parse_number(trim(line.substr(open, close - open)));
}

struct LineMatch {
  GroundTruth value;
  FormatClass format;
  std::size_t line;
};

std::optional<GroundTruth> canonical_line(std::string_view line) {
  line = trim(line);
  if (line.substr(0, 7) != "Answer:") return std::nullopt;
  return number_payload(line.substr(7));
}

std::optional<GroundTruth> variant_line(std::string_view raw) {
  if (auto boxed = boxed_value(raw)) return boxed;
  const std::string stripped = strip_markup(raw);
  const std::string low = to_lower(stripped);
  static constexpr std::string_view kMarkers[] = {"answer:", "answer is", "answer ="};
  std::size_t best = std::string::npos;
  std::size_t best_len = 0;
  for (auto marker : kMarkers) {
    const auto pos = low.rfind(marker);
    if (pos != std::string::npos && (best == std::string::npos || pos > best)) {
      best = pos;
      best_len = marker.size();
    }
  }
  if (best == std::string::npos) return std::nullopt;
  std::string_view rest = std::string_view(stripped).substr(best + best_len);
  rest = trim(rest);
  if (!rest.empty() && rest.front() == ':') rest.remove_prefix(1);
  return number_payload(rest);
}

ParsedAnswer failed(ParseStatus status, int steps) {
  ParsedAnswer p;
  p.status = status;
  p.format_class = FormatClass::Invalid;
  p.step_count = steps;
  return p;
}

int count_nonempty(const std::vector<std::string_view>& lines, std::size_t end) {
  int n = 0;
  for (std::size_t i = 0; i < end && i < lines.size(); ++i)
    if (!trim(lines[i]).empty()) ++n;
  return n;
}

int count_enumerated(std::string_view text) {
  int n = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!is_digit(text[i])) continue;
    if (i > 0 && !is_space(text[i - 1])) {
      while (i < text.size() && is_digit(text[i])) ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_digit(text[j])) ++j;
    if (j - i <= 3 && j + 1 < text.size() && (text[j] == '.' || text[j] == ')') && is_space(text[j + 1])) ++n;
    i = j;
  }
  return n;
}

// --- JSON candidate discovery ------------------------------------------------

struct Span {
  std::size_t begin;
  std::size_t end;  // one past the closing brace
};

/// Balanced {...} spans ordered by end descending, outer spans first.
std::vector<Span> brace_spans(std::string_view text) {
  std::vector<std::size_t> stack;
  std::vector<Span> spans;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '"' && !stack.empty()) {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '"' && text[j] != '\n') j += (text[j] == '\\') ? 2 : 1;
      i = std::min(j, text.size());
      continue;
    }
    if (c == '{') {
      if (stack.size() >= kMaxBraceDepth) stack.clear();
      stack.push_back(i);
    } else if (c == '}' && !stack.empty()) {
      spans.push_back({stack.back(), i + 1});
      stack.pop_back();
    }
  }
  std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) {
    return a.end != b.end ? a.end > b.end : a.begin < b.begin;
  });
  return spans;
}

std::optional<Json> parse_json(std::string_view text) {
  Json j = Json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  return j;
}

std::optional<std::int64_t> as_int(const Json& j) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) return std::nullopt;
    return j.get<std::int64_t>();
  }
  if (j.is_number_float()) {
    const double d = j.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
    return std::nullopt;
  }
  if (j.is_string()) {
    const auto n = parse_number(trim(j.get_ref<const std::string&>()));
    if (n && std::holds_alternative<IntScalar>(*n)) return std::get<IntScalar>(*n).value;
  }
  return std::nullopt;
}

std::optional<double> as_real(const Json& j) {
  if (j.is_number()) {
    const double d = j.get<double>();
    return std::isfinite(d) ? std::optional<double>(d) : std::nullopt;
  }
  if (j.is_string()) {
    const auto n = parse_number(trim(j.get_ref<const std::string&>()));
    if (!n) return std::nullopt;
    if (const auto* i = std::get_if<IntScalar>(&*n)) return static_cast<double>(i->value);
    return std::get<RealScalar>(*n).value;
  }
  return std::nullopt;
}

std::optional<int> as_node(const Json& j) {
  const auto v = as_int(j);
  if (!v || *v < INT32_MIN || *v > INT32_MAX) return std::nullopt;
  return static_cast<int>(*v);
}

std::optional<std::vector<int>> as_node_list(const Json& j) {
  if (!j.is_array()) return std::nullopt;
  std::vector<int> out;
  for (const auto& v : j) {
    const auto n = as_node(v);
    if (!n) return std::nullopt;
    out.push_back(*n);
  }
  return out;
}

std::optional<std::string> orientation_token(std::string_view raw) {
  std::string s = to_lower(trim(raw));
  if (s == "east" || s == "e") return "East";
  if (s == "north" || s == "n") return "North";
  if (s == "west" || s == "w") return "West";
  if (s == "south" || s == "s") return "South";
  return std::nullopt;
}

std::optional<std::string> relative_token(std::string_view raw) {
  std::string s = to_lower(trim(raw));
  std::replace(s.begin(), s.end(), '_', '-');
  std::replace(s.begin(), s.end(), ' ', '-');
  if (s == "same") return "same";
  if (s == "opposite") return "opposite";
  if (s == "left-of" || s == "left") return "left-of";
  if (s == "right-of" || s == "right") return "right-of";
  return std::nullopt;
}

std::optional<GroundTruth> decode(const Json& payload, ExpectedShape shape) {
  switch (shape) {
    case ExpectedShape::Integer:
      if (auto v = as_int(payload)) return IntScalar{*v};
      return std::nullopt;
    case ExpectedShape::Real:
      if (auto v = as_real(payload)) return RealScalar{*v, 3};
      return std::nullopt;
    case ExpectedShape::VertexSet:
      if (auto v = as_node_list(payload)) return VertexSet{*v};
      return std::nullopt;
    case ExpectedShape::NodeSequence:
      if (auto v = as_node_list(payload)) return NodeSequence{*v};
      return std::nullopt;
    case ExpectedShape::EdgeSet: {
      if (!payload.is_array()) return std::nullopt;
      EdgeSet set;
      for (const auto& e : payload) {
        auto pair = as_node_list(e);
        if (!pair || pair->size() != 2) return std::nullopt;
        set.edges.emplace_back((*pair)[0], (*pair)[1]);
      }
      return set;
    }
    case ExpectedShape::Partition: {
      std::vector<const Json*> parts;
      if (payload.is_array() || payload.is_object()) {
        for (const auto& p : payload) parts.push_back(&p);
      }
      if (parts.size() != 2) return std::nullopt;
      auto a = as_node_list(*parts[0]);
      auto b = as_node_list(*parts[1]);
      if (!a || !b) return std::nullopt;
      return Partition{*a, *b};
    }
    case ExpectedShape::Coordinate: {
      std::optional<double> x, y;
      if (payload.is_object()) {
        for (auto it = payload.begin(); it != payload.end(); ++it) {
          const std::string key = to_lower(it.key());
          if (key == "x") x = as_real(it.value());
          if (key == "y") y = as_real(it.value());
        }
        if (payload.size() != 2) return std::nullopt;
      } else if (payload.is_array() && payload.size() == 2) {
        x = as_real(payload[0]);
        y = as_real(payload[1]);
      }
      if (!x || !y) return std::nullopt;
      return Coordinate{*x, *y};
    }
    case ExpectedShape::Orientation:
      if (!payload.is_string()) return std::nullopt;
      if (auto t = orientation_token(payload.get_ref<const std::string&>())) return Orientation{*t};
      return std::nullopt;
    case ExpectedShape::RelativeOrientation:
      if (!payload.is_string()) return std::nullopt;
      if (auto t = relative_token(payload.get_ref<const std::string&>())) return RelativeOrientation{*t};
      return std::nullopt;
  }
  return std::nullopt;
}

/// `{"answer": payload}` wrapper, else the object itself as a bare payload.
std::optional<GroundTruth> decode_wrapped(const Json& j, ExpectedShape shape) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (to_lower(it.key()) == "answer") return decode(it.value(), shape);
    }
  }
  return decode(j, shape);
}

ParsedAnswer extracted(GroundTruth value, FormatClass format, int steps) {
  ParsedAnswer p;
  p.status = ParseStatus::Extracted;
  p.value = std::move(value);
  p.format_class = format;
  p.step_count = steps;
  return p;
}

std::optional<GroundTruth> from_fenced_blocks(std::string_view text, ExpectedShape shape) {
  std::vector<std::string_view> blocks;
  std::size_t pos = 0;
  while (true) {
    const auto open = text.find("```", pos);
    if (open == std::string_view::npos) break;
    const auto close = text.find("```", open + 3);
    if (close == std::string_view::npos) break;
    std::string_view body = text.substr(open + 3, close - open - 3);
    const auto newline = body.find('\n');
    if (newline != std::string_view::npos && trim(body.substr(0, newline)).find_first_of("{[\"") == std::string_view::npos) {
      body = body.substr(newline + 1);  // language tag
    }
    blocks.push_back(body);
    pos = close + 3;
  }
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
    auto j = parse_json(trim(*it));
    if (!j || !j->is_object()) continue;
    if (auto v = decode_wrapped(*j, shape)) return v;
  }
  return std::nullopt;
}

std::optional<GroundTruth> from_objects(std::string_view text, ExpectedShape shape) {
  std::size_t tries = 0;
  for (const auto& span : brace_spans(text)) {
    if (++tries > kMaxJsonCandidates) break;
    auto j = parse_json(text.substr(span.begin, span.end - span.begin));
    if (!j || !j->is_object()) continue;
    if (auto v = decode_wrapped(*j, shape)) return v;
  }
  return std::nullopt;
}

std::optional<GroundTruth> from_last_line(std::string_view text, ExpectedShape shape) {
  const auto lines = split_lines(text);
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    std::string line = strip_markup(*it);
    if (line.empty()) continue;
    const std::string low = to_lower(line);
    for (std::string_view prefix : {"final answer:", "answer:"}) {
      if (low.rfind(prefix, 0) == 0) {
        line = std::string(trim(std::string_view(line).substr(prefix.size())));
        break;
      }
    }
    if (!line.empty() && line.back() == '.') line.pop_back();
    if (auto j = parse_json(line)) {
      if (auto v = decode(*j, shape)) return v;
    }
    if (shape == ExpectedShape::Orientation || shape == ExpectedShape::RelativeOrientation) {
      if (auto v = decode(Json(line), shape)) return v;
    }
    return std::nullopt;  // only the last non-empty line counts
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(ParseStatus status) noexcept {
  switch (status) {
    case ParseStatus::Extracted: return "extracted";
    case ParseStatus::ExtractionFailed: return "extraction_failed";
    case ParseStatus::Truncated: return "truncated";
  }
  return "extraction_failed";
}

std::string_view to_string(FormatClass format) noexcept {
  switch (format) {
    case FormatClass::CanonicalAnswerLine: return "canonical_answer_line";
    case FormatClass::AcceptableVariant: return "acceptable_variant";
    case FormatClass::JsonObject: return "json_object";
    case FormatClass::JsonCodeBlock: return "json_code_block";
    case FormatClass::BareValue: return "bare_value";
    case FormatClass::Invalid: return "invalid";
  }
  return "invalid";
}

FormatClass parse_format_class(std::string_view text) {
  for (auto f : {FormatClass::CanonicalAnswerLine, FormatClass::AcceptableVariant, FormatClass::JsonObject,
                 FormatClass::JsonCodeBlock, FormatClass::BareValue, FormatClass::Invalid}) {
    if (to_string(f) == text) return f;
  }
  throw DataError("unknown format class '" + std::string(text) + "'");
}

std::string_view to_string(ExpectedShape shape) noexcept {
  switch (shape) {
    case ExpectedShape::Integer: return "integer";
    case ExpectedShape::Real: return "real";
    case ExpectedShape::VertexSet: return "vertex_set";
    case ExpectedShape::EdgeSet: return "edge_set";
    case ExpectedShape::NodeSequence: return "node_sequence";
    case ExpectedShape::Partition: return "partition";
    case ExpectedShape::Coordinate: return "coordinate";
    case ExpectedShape::Orientation: return "orientation";
    case ExpectedShape::RelativeOrientation: return "relative_orientation";
  }
  return "integer";
}

ExpectedShape expected_shape_of(const ProblemSpec& spec) {
  if (const auto* c = std::get_if<counting::CountingSpec>(&spec)) {
    const auto k = c->final_op.kind;
    return (k == counting::AggregateKind::Mean || k == counting::AggregateKind::Median) ? ExpectedShape::Real
                                                                                        : ExpectedShape::Integer;
  }
  if (const auto* g = std::get_if<graph::GraphProblem>(&spec)) {
    switch (graph::answer_shape(g->op.kind)) {
      case graph::AnswerShape::VertexSet: return ExpectedShape::VertexSet;
      case graph::AnswerShape::EdgeSet: return ExpectedShape::EdgeSet;
      case graph::AnswerShape::NodeSequence: return ExpectedShape::NodeSequence;
      case graph::AnswerShape::Partition: return ExpectedShape::Partition;
      case graph::AnswerShape::Integer: return ExpectedShape::Integer;
      case graph::AnswerShape::Real: return ExpectedShape::Real;
    }
  }
  const auto& s = std::get<spatial::SpatialProblem>(spec);
  switch (s.query.kind) {
    case QueryKind::AbsoluteLocation:
    case QueryKind::RelativeLocation:
      return ExpectedShape::Coordinate;
    case QueryKind::AbsoluteOrientation: return ExpectedShape::Orientation;
    case QueryKind::RelativeOrientation: return ExpectedShape::RelativeOrientation;
  }
  return ExpectedShape::Coordinate;
}

std::optional<GroundTruth> parse_number(std::string_view text) {
  if (text.empty() || text.size() > 64) return std::nullopt;
  std::string digits;
  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '-' || text[i] == '+') {
    negative = text[i] == '-';
    ++i;
  } else if (text.substr(0, 3) == "\xE2\x88\x92") {  // unicode minus
    negative = true;
    i = 3;
  }
  const std::size_t int_start = i;
  std::size_t group = 0;
  bool saw_comma = false;
  while (i < text.size() && (is_digit(text[i]) || text[i] == ',')) {
    if (text[i] == ',') {
      if (i == int_start || (saw_comma ? group != 3 : group > 3) || group == 0) return std::nullopt;
      saw_comma = true;
      group = 0;
    } else {
      digits += text[i];
      ++group;
    }
    ++i;
  }
  if (digits.empty() || (saw_comma && group != 3)) return std::nullopt;
  if (i == text.size()) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
    return IntScalar{negative ? -value : value};
  }
  if (text[i] != '.') return std::nullopt;
  ++i;
  const std::size_t frac_start = i;
  while (i < text.size() && is_digit(text[i])) ++i;
  if (i != text.size() || i == frac_start) return std::nullopt;
  const std::string literal = (negative ? "-" : "") + digits + "." + std::string(text.substr(frac_start));
  double value = 0;
  const auto [ptr, ec] = std::from_chars(literal.data(), literal.data() + literal.size(), value);
  if (ec != std::errc() || !std::isfinite(value)) return std::nullopt;
  return RealScalar{value, static_cast<int>(text.size() - frac_start)};
}

int count_steps(std::string_view text) {
  const auto lines = split_lines(text);
  return std::max(count_nonempty(lines, lines.size()), count_enumerated(text));
}

ParsedAnswer parse_counting(const Completion& completion) {
  const std::string_view text = completion.text;
  if (completion.truncated) return failed(ParseStatus::Truncated, count_steps(text));
  const auto lines = split_lines(text);

  auto steps_before = [&](std::size_t line) {
    std::size_t offset = 0;
    for (std::size_t i = 0; i < line; ++i) offset += lines[i].size() + 1;
    return std::max(count_nonempty(lines, line), count_enumerated(text.substr(0, std::min(offset, text.size()))));
  };

  for (std::size_t i = lines.size(); i-- > 0;) {
    if (auto v = canonical_line(lines[i])) return extracted(*v, FormatClass::CanonicalAnswerLine, steps_before(i));
  }
  for (std::size_t i = lines.size(); i-- > 0;) {
    if (auto v = variant_line(lines[i])) return extracted(*v, FormatClass::AcceptableVariant, steps_before(i));
  }
  for (std::size_t i = lines.size(); i-- > 0;) {
    const std::string line = strip_markup(lines[i]);
    if (line.empty()) continue;
    if (auto v = number_payload(line)) return extracted(*v, FormatClass::BareValue, steps_before(i));
    break;
  }
  return failed(ParseStatus::ExtractionFailed, count_steps(text));
}

ParsedAnswer parse_json_answer(const Completion& completion, ExpectedShape shape) {
  const std::string_view text = completion.text;
  const int steps = count_steps(text);
  if (completion.truncated) return failed(ParseStatus::Truncated, steps);
  if (auto v = from_fenced_blocks(text, shape)) return extracted(*v, FormatClass::JsonCodeBlock, steps);
  if (auto v = from_objects(text, shape)) return extracted(*v, FormatClass::JsonObject, steps);
  if (auto v = from_last_line(text, shape)) return extracted(*v, FormatClass::BareValue, steps);
  return failed(ParseStatus::ExtractionFailed, steps);
}

ParsedAnswer parse_for(const ProblemInstance& problem, const Completion& completion) {
  if (problem.family == TaskFamily::Counting) return parse_counting(completion);
  return parse_json_answer(completion, expected_shape_of(problem.spec));
}

std::optional<GroundTruth> decode_payload(const std::string& json_text, ExpectedShape shape) {
  auto j = parse_json(json_text);
  if (!j) return std::nullopt;
  return decode_wrapped(*j, shape);
}

// ---------------------------------------------------------------------------
// Matching
// ---------------------------------------------------------------------------

namespace {

std::optional<double> numeric(const GroundTruth& t) {
  if (const auto* i = std::get_if<IntScalar>(&t)) return static_cast<double>(i->value);
  if (const auto* r = std::get_if<RealScalar>(&t)) return r->value;
  return std::nullopt;
}

bool same_3dp(double a, double b) { return round_scaled(a, 3) == round_scaled(b, 3); }

std::set<int> as_set(const std::vector<int>& v) { return {v.begin(), v.end()}; }

}  // namespace

bool match_value(const ParsedAnswer& parsed, const GroundTruth& truth, bool allow_reversal) {
  if (parsed.status != ParseStatus::Extracted || !parsed.value) {
    throw PreconditionError("match_value needs an extracted answer");
  }
  const GroundTruth& got = *parsed.value;
  if (const auto* ti = std::get_if<IntScalar>(&truth)) {
    if (const auto* gi = std::get_if<IntScalar>(&got)) return gi->value == ti->value;
  }
  if (auto t = numeric(truth)) {
    auto g = numeric(got);
    return g && same_3dp(*g, *t);
  }
  if (const auto* t = std::get_if<VertexSet>(&truth)) {
    const auto* g = std::get_if<VertexSet>(&got);
    return g && g->nodes.size() == as_set(g->nodes).size() && as_set(g->nodes) == as_set(t->nodes);
  }
  if (const auto* t = std::get_if<NodeSequence>(&truth)) {
    const auto* g = std::get_if<NodeSequence>(&got);
    if (!g) return false;
    if (g->nodes == t->nodes) return true;
    return allow_reversal && std::equal(g->nodes.rbegin(), g->nodes.rend(), t->nodes.begin(), t->nodes.end());
  }
  if (const auto* t = std::get_if<EdgeSet>(&truth)) {
    const auto* g = std::get_if<EdgeSet>(&got);
    if (!g) return false;
    auto norm = [allow_reversal](const EdgeSet& s) {
      std::set<std::pair<int, int>> out;
      for (auto [u, v] : s.edges) out.insert(allow_reversal && u > v ? std::pair{v, u} : std::pair{u, v});
      return out;
    };
    return g->edges.size() == norm(*g).size() && norm(*g) == norm(*t);
  }
  if (const auto* t = std::get_if<Partition>(&truth)) {
    const auto* g = std::get_if<Partition>(&got);
    if (!g) return false;
    const auto a = as_set(g->first), b = as_set(g->second);
    const auto ta = as_set(t->first), tb = as_set(t->second);
    return (a == ta && b == tb) || (a == tb && b == ta);
  }
  if (const auto* t = std::get_if<Coordinate>(&truth)) {
    const auto* g = std::get_if<Coordinate>(&got);
    return g && same_3dp(g->x, t->x) && same_3dp(g->y, t->y);
  }
  if (const auto* t = std::get_if<Orientation>(&truth)) {
    const auto* g = std::get_if<Orientation>(&got);
    return g && g->token == t->token;
  }
  if (const auto* t = std::get_if<RelativeOrientation>(&truth)) {
    const auto* g = std::get_if<RelativeOrientation>(&got);
    return g && g->token == t->token;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Normalizer
// ---------------------------------------------------------------------------

std::string StubNormalizer::canonicalize(const ProblemInstance& problem, const std::string& completion) {
  const auto shape = expected_shape_of(problem.spec);
  const auto lines = split_lines(completion);
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    const std::string_view line = *it;
    if (shape == ExpectedShape::Orientation || shape == ExpectedShape::RelativeOrientation) {
      std::string word;
      std::optional<std::string> found;
      for (std::size_t i = 0; i <= line.size(); ++i) {
        const char c = i < line.size() ? line[i] : ' ';
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '-') {
          word += c;
          continue;
        }
        if (!word.empty()) {
          auto t = shape == ExpectedShape::Orientation ? orientation_token(word) : relative_token(word);
          if (t && word.size() > 1) found = t;
          word.clear();
        }
      }
      if (found) return Json{{"answer", *found}}.dump();
      continue;
    }
    std::vector<std::string> numbers;
    std::string current;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      const char c = i < line.size() ? line[i] : ' ';
      const bool sign = c == '-' && current.empty() && i + 1 < line.size() && is_digit(line[i + 1]);
      if (is_digit(c) || sign || (c == '.' && !current.empty() && i + 1 < line.size() && is_digit(line[i + 1]))) {
        current += c;
      } else if (!current.empty()) {
        numbers.push_back(current);
        current.clear();
      }
    }
    if (numbers.empty()) continue;
    Json answer;
    switch (shape) {
      case ExpectedShape::Integer:
      case ExpectedShape::Real:
        answer = Json::parse(numbers.back(), nullptr, false);
        break;
      case ExpectedShape::Coordinate:
        if (numbers.size() < 2) return completion;
        answer = {{"x", Json::parse(numbers[numbers.size() - 2], nullptr, false)},
                  {"y", Json::parse(numbers.back(), nullptr, false)}};
        break;
      case ExpectedShape::VertexSet:
      case ExpectedShape::NodeSequence: {
        answer = Json::array();
        for (const auto& n : numbers) answer.push_back(Json::parse(n, nullptr, false));
        break;
      }
      default:
        return completion;
    }
    return Json{{"answer", answer}}.dump();
  }
  return completion;
}

ParsedAnswer normalize_with_fallback(const Completion& completion, const ParsedAnswer& primary,
                                     const ProblemInstance& problem, Normalizer& normalizer) {
  if (primary.status != ParseStatus::ExtractionFailed) {
    throw PreconditionError("normalizer fallback applies only to failed extractions");
  }
  if (problem.family == TaskFamily::Counting) {
    throw PreconditionError("counting answers are never normalized");
  }
  const std::string canonical = normalizer.canonicalize(problem, completion.text);
  Completion rewritten{canonical, false, completion.model_id, completion.problem_id};
  ParsedAnswer parsed = parse_json_answer(rewritten, expected_shape_of(problem.spec));
  if (parsed.status != ParseStatus::Extracted) return primary;
  parsed.format_class = FormatClass::AcceptableVariant;
  parsed.step_count = primary.step_count;
  parsed.via_normalizer = true;
  return parsed;
}

std::string render_answer(const GroundTruth& truth, TaskFamily family) {
  if (family == TaskFamily::Counting) {
    if (const auto* i = std::get_if<IntScalar>(&truth)) return "Answer: " + std::to_string(i->value);
    if (const auto* r = std::get_if<RealScalar>(&truth)) return "Answer: " + format_fixed(r->value, r->precision);
  }
  Json answer;
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, IntScalar>) {
          answer = t.value;
        } else if constexpr (std::is_same_v<T, RealScalar>) {
          answer = t.value;
        } else if constexpr (std::is_same_v<T, VertexSet> || std::is_same_v<T, NodeSequence>) {
          answer = t.nodes;
        } else if constexpr (std::is_same_v<T, EdgeSet>) {
          answer = Json::array();
          for (const auto& [u, v] : t.edges) answer.push_back(Json::array({u, v}));
        } else if constexpr (std::is_same_v<T, Partition>) {
          answer = Json::array({t.first, t.second});
        } else if constexpr (std::is_same_v<T, Coordinate>) {
          answer = {{"x", t.x}, {"y", t.y}};
        } else {
          answer = t.token;
        }
      },
      truth);
  return Json{{"answer", answer}}.dump();
}

}  // namespace rlvr::parsing
