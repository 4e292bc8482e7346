#pragma once

// Text formats for sampled functions and kernels, and the builtin
// expression grammar used on the command line:
//
//   zero                  0
//   const:c               c
//   sin:k[,a]             a sin(k x)       (a defaults to 1)
//   cos:k[,a]             a cos(k x)
//   poly:c0[,c1,...]      c0 + c1 x + c2 x^2 + ...
//   step:a,v              v for x >= a, 0 before
//   csv:path              values read from an `x,value` file on the same grid
//
// Every numeric literal may be `pi`, `-pi`, `<number>*pi` or `pi/<number>`.

#include "slfrechet/grid.hpp"
#include "slfrechet/ode.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace slf {

// Parses a real literal with optional `pi` forms. InputError on failure.
double parse_real(std::string_view text);

SampledFn parse_builtin(std::string_view expr, const Grid& grid);

// Two columns `x,value`, one row per node, header `x,value`.
void write_csv(std::ostream& out, const SampledFn& f);
void write_csv(const std::string& path, const SampledFn& f);

// Reads an `x,value` file (header optional) whose nodes match `grid` within
// 1e-9 relative.
SampledFn read_csv(std::istream& in, const Grid& grid);
SampledFn read_csv(const std::string& path, const Grid& grid);

// Rows `x,y,value` for every node pair, header `x,y,value`.
void write_kernel_csv(std::ostream& out, const KernelMatrix& K);

} // namespace slf
