#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mcir/box.hpp"
#include "mcir/expr.hpp"

namespace mcir {

/// An objective together with its search domain, as stored on disk:
///
///     dims: 3
///     domain: [-1,1] x 3            (or one [lo,hi] per dimension)
///     x0^2 + sin(x1) * x2           (the remaining lines)
struct ProblemFile {
  Expression function;
  BoxDomain domain;
};

ProblemFile parse_problem_file(std::string_view text);
ProblemFile load_problem_file(const std::filesystem::path& path);
std::string format_problem_file(const Expression& f, const BoxDomain& domain);

}  // namespace mcir
