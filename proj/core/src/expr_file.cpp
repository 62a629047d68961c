#include "mcir/expr_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mcir {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Removes the first line from `text` and returns it.
std::string_view take_line(std::string_view& text) {
  const auto nl = text.find('\n');
  std::string_view line = text.substr(0, nl);
  text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
  return line;
}

std::string_view expect_key(std::string_view line, std::string_view key, int line_no) {
  line = trim(line);
  if (line.substr(0, key.size()) != key || line.size() <= key.size() || line[key.size()] != ':') {
    throw ParseError("expected '" + std::string(key) + ": ...'", line_no, 1);
  }
  return trim(line.substr(key.size() + 1));
}

double to_double(std::string_view s, int line_no) {
  s = trim(s);
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("malformed number '" + std::string(s) + "'", line_no, 1);
  }
  return v;
}

std::size_t to_count(std::string_view s, int line_no) {
  s = trim(s);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("expected a non-negative integer, found '" + std::string(s) + "'", line_no, 1);
  }
  return v;
}

BoxDomain parse_domain(std::string_view spec, std::size_t dims, int line_no) {
  std::vector<Interval> sides;
  std::size_t pos = 0;
  while (true) {
    const auto open = spec.find('[', pos);
    if (open == std::string_view::npos) break;
    const auto close = spec.find(']', open);
    if (close == std::string_view::npos) throw ParseError("unterminated '['", line_no, 1);
    const std::string_view inner = spec.substr(open + 1, close - open - 1);
    const auto comma = inner.find(',');
    if (comma == std::string_view::npos) throw ParseError("expected [lo,hi]", line_no, 1);
    sides.push_back({to_double(inner.substr(0, comma), line_no),
                     to_double(inner.substr(comma + 1), line_no)});
    pos = close + 1;
  }
  if (sides.empty()) throw ParseError("expected at least one [lo,hi]", line_no, 1);

  const std::string_view tail = trim(spec.substr(pos));
  if (!tail.empty()) {
    if (tail.front() != 'x' || sides.size() != 1) {
      throw ParseError("unexpected '" + std::string(tail) + "' after domain", line_no, 1);
    }
    const std::size_t repeat = to_count(tail.substr(1), line_no);
    if (repeat != dims) {
      throw ParseError("domain repeats " + std::to_string(repeat) + " times but dims is " +
                           std::to_string(dims),
                       line_no, 1);
    }
    sides.assign(dims, sides.front());
  }
  if (sides.size() != dims) {
    throw ParseError("domain lists " + std::to_string(sides.size()) + " intervals for " +
                         std::to_string(dims) + " dimension(s)",
                     line_no, 1);
  }
  try {
    return BoxDomain(std::move(sides));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), line_no, 1);
  }
}

}  // namespace

ProblemFile parse_problem_file(std::string_view text) {
  const std::size_t dims = to_count(expect_key(take_line(text), "dims", 1), 1);
  if (dims == 0) throw ParseError("dims must be positive", 1, 1);
  BoxDomain domain = parse_domain(expect_key(take_line(text), "domain", 2), dims, 2);
  return {parse(text, dims, 3), std::move(domain)};
}

ProblemFile load_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open expression file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_problem_file(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line(), e.column());
  }
}

std::string format_problem_file(const Expression& f, const BoxDomain& domain) {
  if (domain.dims() != f.dims()) throw std::invalid_argument("format_problem_file: dimension mismatch");
  auto number = [](double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
  };
  std::string out = "dims: " + std::to_string(f.dims()) + "\ndomain: ";
  bool uniform = true;
  for (std::size_t d = 1; d < domain.dims(); ++d) uniform = uniform && domain[d] == domain[0];
  if (uniform) {
    out += "[" + number(domain.lower(0)) + "," + number(domain.upper(0)) + "] x " +
           std::to_string(f.dims());
  } else {
    for (std::size_t d = 0; d < domain.dims(); ++d) {
      if (d > 0) out += ' ';
      out += "[" + number(domain.lower(d)) + "," + number(domain.upper(d)) + "]";
    }
  }
  out += '\n';
  out += unparse(f);
  out += '\n';
  return out;
}

}  // namespace mcir
