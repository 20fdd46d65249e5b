#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qlat/genus.hpp"

namespace qlat {

// parsed command line; strings are kept in canonical form so that
// parse_job(render_job(s)) reproduces s exactly
struct JobSpec {
  std::string target;  // genus | ideal-classes | orders | mass | verify
  bool rationals = true;
  Int d = 0;  // real_quadratic parameter, squarefree > 1
  std::string a = "1";
  std::string b = "1";
  std::string ideal = "unit";  // unit | prime:p^e*... | narrow class index
  std::string output = "table";
  int den_cap = 32;
  int threads = 1;
  Int seed = 0;

  bool operator==(const JobSpec& o) const = default;
};

std::optional<JobSpec> parse_job(const std::vector<std::string>& args, std::string& err);
std::string render_job(const JobSpec& spec);

NumberField job_field(const JobSpec& spec);
std::optional<FieldIdeal> parse_ideal_spec(const NumberField& K, const std::string& s,
                                           std::string& err);
std::string ideal_string(const FieldIdeal& x);

// exit codes: 0 ok, 2 failed consistency check, 3 search cap exceeded,
// 64 usage error
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qlat
