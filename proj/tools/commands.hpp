#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "levyspde/quadrature.hpp"
#include "levyspde/sampler.hpp"
#include "levyspde/symbol.hpp"
#include "levyspde/test_function.hpp"

namespace levyspde::cli {

struct Options {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int threads = 1;
  bool strict = false;
};

enum class Outcome { pass, fail, inconclusive };

/// 0 pass, 1 failed check or error, 2 inconclusive (1 under --strict).
int exit_code(Outcome o, bool strict);

const std::vector<std::string>& subcommands();

/// Runs one experiment and writes <out>/<subcommand>.csv plus a JSON sidecar.
Outcome run(const std::string& subcommand, const Config& cfg, const Options& opt);

Symbol symbol_from(const Config& cfg);
TestFunction test_function_from(const Config& cfg);
QuadratureSpec quadrature_from(const Config& cfg);
Lattice lattice_from(const Config& cfg);

/// Reads one replicate of a field CSV (t, x, replicate, value) onto the lattice.
FieldSample read_field_csv(const std::string& path, const Lattice& lat, std::size_t replicate);

}  // namespace levyspde::cli
