// Copyright 2026 The wqte Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Writes include/wqte/oracle_constants.hpp: Monte Carlo QTE and overlap
// WQTE for every preset at the benchmark quantile levels.
//
//   freeze_oracles [--draws N] [--seed S] [--out PATH]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wqte/simlab.hpp"

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "kNoValue";
  char buf[40];
  for (int digits = 15; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Freeze Monte Carlo truth constants for the simulation presets"};
  std::size_t draws = 1000000;
  std::uint64_t seed = 20260101;
  std::string out = "include/wqte/oracle_constants.hpp";
  app.add_option("--draws", draws, "Monte Carlo draws per preset");
  app.add_option("--seed", seed, "oracle seed");
  app.add_option("--out", out, "output header");
  CLI11_PARSE(app, argc, argv);

  const std::vector<double> taus{0.5, 0.9, 0.95, 0.99};
  std::ostringstream rows;
  std::size_t count = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& key : wqte::preset_keys()) {
    const auto sc = wqte::make_scenario(key);
    std::vector<int> levels{2};
    if (sc.exposure.is_categorical()) levels = {2, 3};
    for (int level : levels) {
      const auto s = wqte::draw_potential_outcomes(sc, draws, seed, level);
      for (double tau : taus) {
        const double qte = wqte::unweighted_quantile(s.y_a, tau) - wqte::unweighted_quantile(s.y_b, tau);
        double wqte_ow = std::numeric_limits<double>::quiet_NaN();
        if (!sc.exposure.is_continuous()) {
          wqte_ow = wqte::weighted_quantile(s.y_a, s.overlap, tau) - wqte::weighted_quantile(s.y_b, s.overlap, tau);
        }
        rows << "    {\"" << key << "\", " << level << ", " << num(tau) << ", " << num(qte) << ", " << num(wqte_ow)
             << "},\n";
        ++count;
      }
    }
    std::cerr << key << "\n";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::ostringstream h;
  h << "// Copyright 2026 The wqte Authors\n"
       "//\n"
       "// Licensed under the Apache License, Version 2.0 (the \"License\");\n"
       "// you may not use this file except in compliance with the License.\n"
       "// You may obtain a copy of the License at\n"
       "//\n"
       "//     http://www.apache.org/licenses/LICENSE-2.0\n"
       "//\n"
       "// Unless required by applicable law or agreed to in writing, software\n"
       "// distributed under the License is distributed on an \"AS IS\" BASIS,\n"
       "// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.\n"
       "// See the License for the specific language governing permissions and\n"
       "// limitations under the License.\n\n"
       "// Generated by tools/freeze_oracles. Do not edit.\n\n"
       "#ifndef WQTE_ORACLE_CONSTANTS_HPP\n#define WQTE_ORACLE_CONSTANTS_HPP\n\n"
       "#include <cstddef>\n#include <cstdint>\n#include <limits>\n\n"
       "namespace wqte {\n\n"
       "struct FrozenOracle {\n"
       "  const char* key;\n"
       "  int level;  // contrast level vs baseline (2 for binary/continuous)\n"
       "  double tau;\n"
       "  double qte;\n"
       "  double wqte_overlap;  // NaN for continuous exposure\n"
       "};\n\n"
       "inline constexpr double kNoValue = std::numeric_limits<double>::quiet_NaN();\n"
       "inline constexpr std::uint64_t kOracleSeed = "
    << seed << "ULL;\n"
       "inline constexpr std::size_t kOracleDraws = "
    << draws << ";\n\n"
       "inline constexpr FrozenOracle kFrozenOracles[] = {\n"
    << rows.str()
    << "};\n\n"
       "inline constexpr std::size_t kFrozenOracleCount = "
    << count << ";\n\n}  // namespace wqte\n\n#endif  // WQTE_ORACLE_CONSTANTS_HPP\n";
  wqte::csv::write_file(out, h.str());
  std::cerr << count << " constants in " << secs << " s\n";
  return 0;
}
