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

// Generated by tools/freeze_oracles. Do not edit.

#ifndef WQTE_ORACLE_CONSTANTS_HPP
#define WQTE_ORACLE_CONSTANTS_HPP

#include <cstddef>
#include <cstdint>
#include <limits>

namespace wqte {

struct FrozenOracle {
  const char* key;
  int level;  // contrast level vs baseline (2 for binary/continuous)
  double tau;
  double qte;
  double wqte_overlap;  // NaN for continuous exposure
};

inline constexpr double kNoValue = std::numeric_limits<double>::quiet_NaN();
inline constexpr std::uint64_t kOracleSeed = 20260101ULL;
inline constexpr std::size_t kOracleDraws = 1000000;

inline constexpr FrozenOracle kFrozenOracles[] = {
    {"binary-weak-d1-nointer-pareto5", 2, 0.5, 1, 0.9999999999999996},
    {"binary-weak-d1-nointer-pareto5", 2, 0.9, 1, 1},
    {"binary-weak-d1-nointer-pareto5", 2, 0.95, 1, 1},
    {"binary-weak-d1-nointer-pareto5", 2, 0.99, 1, 1},
    {"binary-weak-d1-nointer-pareto7", 2, 0.5, 1, 1},
    {"binary-weak-d1-nointer-pareto7", 2, 0.9, 1, 0.9999999999999996},
    {"binary-weak-d1-nointer-pareto7", 2, 0.95, 1, 1},
    {"binary-weak-d1-nointer-pareto7", 2, 0.99, 1, 1},
    {"binary-weak-d1-nointer-pareto10", 2, 0.5, 1, 1},
    {"binary-weak-d1-nointer-pareto10", 2, 0.9, 1, 1},
    {"binary-weak-d1-nointer-pareto10", 2, 0.95, 1, 1.0000000000000004},
    {"binary-weak-d1-nointer-pareto10", 2, 0.99, 1, 1},
    {"binary-weak-d1-nointer-t3", 2, 0.5, 1, 1},
    {"binary-weak-d1-nointer-t3", 2, 0.9, 0.9999999999999996, 1},
    {"binary-weak-d1-nointer-t3", 2, 0.95, 1, 1.0000000000000004},
    {"binary-weak-d1-nointer-t3", 2, 0.99, 1, 1},
    {"binary-weak-d1-inter-pareto5", 2, 0.5, 1.00966725395467, 0.9026896678712277},
    {"binary-weak-d1-inter-pareto5", 2, 0.9, 2.260541480143, 2.086941614869672},
    {"binary-weak-d1-inter-pareto5", 2, 0.95, 2.6043105090990792, 2.4171935584881004},
    {"binary-weak-d1-inter-pareto5", 2, 0.99, 3.2203201519921203, 2.993935752562},
    {"binary-weak-d1-inter-pareto7", 2, 0.5, 1.0047684549215243, 0.8977122191951947},
    {"binary-weak-d1-inter-pareto7", 2, 0.9, 2.274916539717589, 2.099046163482877},
    {"binary-weak-d1-inter-pareto7", 2, 0.95, 2.626652192572826, 2.4416647300760967},
    {"binary-weak-d1-inter-pareto7", 2, 0.99, 3.295114142765539, 3.0704073794818525},
    {"binary-weak-d1-inter-pareto10", 2, 0.5, 1.002395855652228, 0.8952601919156384},
    {"binary-weak-d1-inter-pareto10", 2, 0.9, 2.279171703500075, 2.1044477881936112},
    {"binary-weak-d1-inter-pareto10", 2, 0.95, 2.6389561196016293, 2.451125954576352},
    {"binary-weak-d1-inter-pareto10", 2, 0.99, 3.319626815503848, 3.100129326001606},
    {"binary-weak-d1-inter-t3", 2, 0.5, 1.0020301426401628, 0.8932032090896086},
    {"binary-weak-d1-inter-t3", 2, 0.9, 2.0099422168472, 1.8353124232533355},
    {"binary-weak-d1-inter-t3", 2, 0.95, 2.2280895529936586, 2.0325775920248508},
    {"binary-weak-d1-inter-t3", 2, 0.99, 2.2976273537950913, 2.076234063042935},
    {"binary-weak-d4-nointer-pareto5", 2, 0.5, 1, 1},
    {"binary-weak-d4-nointer-pareto5", 2, 0.9, 1, 1},
    {"binary-weak-d4-nointer-pareto5", 2, 0.95, 0.9999999999999991, 1.0000000000000009},
    {"binary-weak-d4-nointer-pareto5", 2, 0.99, 1, 1},
    {"binary-weak-d4-nointer-pareto7", 2, 0.5, 1, 0.9999999999999996},
    {"binary-weak-d4-nointer-pareto7", 2, 0.9, 1, 1},
    {"binary-weak-d4-nointer-pareto7", 2, 0.95, 1.0000000000000009, 1},
    {"binary-weak-d4-nointer-pareto7", 2, 0.99, 1, 1},
    {"binary-weak-d4-nointer-pareto10", 2, 0.5, 1, 1},
    {"binary-weak-d4-nointer-pareto10", 2, 0.9, 1, 1},
    {"binary-weak-d4-nointer-pareto10", 2, 0.95, 0.9999999999999991, 1},
    {"binary-weak-d4-nointer-pareto10", 2, 0.99, 1, 1},
    {"binary-weak-d4-nointer-t3", 2, 0.5, 1, 1.0000000000000002},
    {"binary-weak-d4-nointer-t3", 2, 0.9, 1, 1},
    {"binary-weak-d4-nointer-t3", 2, 0.95, 1, 1.0000000000000009},
    {"binary-weak-d4-nointer-t3", 2, 0.99, 1, 1},
    {"binary-strong-d1-nointer-pareto5", 2, 0.5, 1, 1},
    {"binary-strong-d1-nointer-pareto5", 2, 0.9, 1, 1},
    {"binary-strong-d1-nointer-pareto5", 2, 0.95, 1, 1.0000000000000004},
    {"binary-strong-d1-nointer-pareto5", 2, 0.99, 1, 1},
    {"binary-strong-d1-nointer-pareto7", 2, 0.5, 1, 1},
    {"binary-strong-d1-nointer-pareto7", 2, 0.9, 1, 1},
    {"binary-strong-d1-nointer-pareto7", 2, 0.95, 1, 0.9999999999999996},
    {"binary-strong-d1-nointer-pareto7", 2, 0.99, 1, 0.9999999999999996},
    {"binary-strong-d1-nointer-pareto10", 2, 0.5, 1, 0.9999999999999998},
    {"binary-strong-d1-nointer-pareto10", 2, 0.9, 1, 1},
    {"binary-strong-d1-nointer-pareto10", 2, 0.95, 1, 1},
    {"binary-strong-d1-nointer-pareto10", 2, 0.99, 1, 1},
    {"binary-strong-d1-nointer-t3", 2, 0.5, 1, 1.0000000000000002},
    {"binary-strong-d1-nointer-t3", 2, 0.9, 0.9999999999999996, 1},
    {"binary-strong-d1-nointer-t3", 2, 0.95, 1, 1.0000000000000004},
    {"binary-strong-d1-nointer-t3", 2, 0.99, 1, 1},
    {"binary-strong-d1-inter-pareto5", 2, 0.5, 1.00966725395467, 0.8578077169394316},
    {"binary-strong-d1-inter-pareto5", 2, 0.9, 2.260541480143, 1.6206628499383426},
    {"binary-strong-d1-inter-pareto5", 2, 0.95, 2.6043105090990792, 1.83505493397131},
    {"binary-strong-d1-inter-pareto5", 2, 0.99, 3.2203201519921203, 2.2206388692255903},
    {"binary-strong-d1-inter-pareto7", 2, 0.5, 1.0047684549215243, 0.8491022932716144},
    {"binary-strong-d1-inter-pareto7", 2, 0.9, 2.274916539717589, 1.6342811775543913},
    {"binary-strong-d1-inter-pareto7", 2, 0.95, 2.626652192572826, 1.8691217053899964},
    {"binary-strong-d1-inter-pareto7", 2, 0.99, 3.295114142765539, 2.3333470307412383},
    {"binary-strong-d1-inter-pareto10", 2, 0.5, 1.002395855652228, 0.8465149005393144},
    {"binary-strong-d1-inter-pareto10", 2, 0.9, 2.279171703500075, 1.6440820841743662},
    {"binary-strong-d1-inter-pareto10", 2, 0.95, 2.6389561196016293, 1.8868839482662052},
    {"binary-strong-d1-inter-pareto10", 2, 0.99, 3.319626815503848, 2.3704872449312786},
    {"binary-strong-d1-inter-t3", 2, 0.5, 1.0020301426401628, 0.8436688725019943},
    {"binary-strong-d1-inter-t3", 2, 0.9, 2.0099422168472, 1.3725616217903989},
    {"binary-strong-d1-inter-t3", 2, 0.95, 2.2280895529936586, 1.4675012008940604},
    {"binary-strong-d1-inter-t3", 2, 0.99, 2.2976273537950913, 1.3991985753927088},
    {"binary-strong-d4-nointer-pareto5", 2, 0.5, 1, 1},
    {"binary-strong-d4-nointer-pareto5", 2, 0.9, 1, 1},
    {"binary-strong-d4-nointer-pareto5", 2, 0.95, 0.9999999999999991, 1},
    {"binary-strong-d4-nointer-pareto5", 2, 0.99, 1, 1},
    {"binary-strong-d4-nointer-pareto7", 2, 0.5, 1, 0.9999999999999996},
    {"binary-strong-d4-nointer-pareto7", 2, 0.9, 1, 1},
    {"binary-strong-d4-nointer-pareto7", 2, 0.95, 1.0000000000000009, 1},
    {"binary-strong-d4-nointer-pareto7", 2, 0.99, 1, 1},
    {"binary-strong-d4-nointer-pareto10", 2, 0.5, 1, 1},
    {"binary-strong-d4-nointer-pareto10", 2, 0.9, 1, 1},
    {"binary-strong-d4-nointer-pareto10", 2, 0.95, 0.9999999999999991, 1},
    {"binary-strong-d4-nointer-pareto10", 2, 0.99, 1, 1},
    {"binary-strong-d4-nointer-t3", 2, 0.5, 1, 1},
    {"binary-strong-d4-nointer-t3", 2, 0.9, 1, 1},
    {"binary-strong-d4-nointer-t3", 2, 0.95, 1, 1},
    {"binary-strong-d4-nointer-t3", 2, 0.99, 1, 1},
    {"categorical-weak-d1-nointer-pareto5", 2, 0.5, 1, 1},
    {"categorical-weak-d1-nointer-pareto5", 2, 0.9, 1, 1.0000000000000004},
    {"categorical-weak-d1-nointer-pareto5", 2, 0.95, 1, 0.9999999999999996},
    {"categorical-weak-d1-nointer-pareto5", 2, 0.99, 1, 1},
    {"categorical-weak-d1-nointer-pareto5", 3, 0.5, -1, -1.0000000000000004},
    {"categorical-weak-d1-nointer-pareto5", 3, 0.9, -1, -1},
    {"categorical-weak-d1-nointer-pareto5", 3, 0.95, -1, -0.9999999999999996},
    {"categorical-weak-d1-nointer-pareto5", 3, 0.99, -1, -1},
    {"categorical-weak-d1-nointer-pareto7", 2, 0.5, 1, 1},
    {"categorical-weak-d1-nointer-pareto7", 2, 0.9, 1, 1},
    {"categorical-weak-d1-nointer-pareto7", 2, 0.95, 1, 1},
    {"categorical-weak-d1-nointer-pareto7", 2, 0.99, 1, 1},
    {"categorical-weak-d1-nointer-pareto7", 3, 0.5, -1, -1.0000000000000002},
    {"categorical-weak-d1-nointer-pareto7", 3, 0.9, -1, -1},
    {"categorical-weak-d1-nointer-pareto7", 3, 0.95, -1, -1},
    {"categorical-weak-d1-nointer-pareto7", 3, 0.99, -1.0000000000000004, -1},
    {"categorical-weak-d1-nointer-pareto10", 2, 0.5, 1, 1},
    {"categorical-weak-d1-nointer-pareto10", 2, 0.9, 1, 1},
    {"categorical-weak-d1-nointer-pareto10", 2, 0.95, 1, 1},
    {"categorical-weak-d1-nointer-pareto10", 2, 0.99, 1, 1},
    {"categorical-weak-d1-nointer-pareto10", 3, 0.5, -1, -1},
    {"categorical-weak-d1-nointer-pareto10", 3, 0.9, -1.0000000000000004, -1},
    {"categorical-weak-d1-nointer-pareto10", 3, 0.95, -1, -1},
    {"categorical-weak-d1-nointer-pareto10", 3, 0.99, -1, -1},
    {"categorical-weak-d1-nointer-t3", 2, 0.5, 1, 0.9999999999999998},
    {"categorical-weak-d1-nointer-t3", 2, 0.9, 0.9999999999999996, 1.0000000000000004},
    {"categorical-weak-d1-nointer-t3", 2, 0.95, 1, 1.0000000000000004},
    {"categorical-weak-d1-nointer-t3", 2, 0.99, 1, 1},
    {"categorical-weak-d1-nointer-t3", 3, 0.5, -1, -1},
    {"categorical-weak-d1-nointer-t3", 3, 0.9, -1, -1},
    {"categorical-weak-d1-nointer-t3", 3, 0.95, -1, -1},
    {"categorical-weak-d1-nointer-t3", 3, 0.99, -1, -1},
    {"categorical-weak-d4-nointer-pareto5", 2, 0.5, 1, 1},
    {"categorical-weak-d4-nointer-pareto5", 2, 0.9, 1, 1},
    {"categorical-weak-d4-nointer-pareto5", 2, 0.95, 0.9999999999999991, 0.9999999999999991},
    {"categorical-weak-d4-nointer-pareto5", 2, 0.99, 1, 1},
    {"categorical-weak-d4-nointer-pareto5", 3, 0.5, -1.0000000000000002, -1},
    {"categorical-weak-d4-nointer-pareto5", 3, 0.9, -1, -1},
    {"categorical-weak-d4-nointer-pareto5", 3, 0.95, -1, -1},
    {"categorical-weak-d4-nointer-pareto5", 3, 0.99, -1, -1},
    {"categorical-weak-d4-nointer-pareto7", 2, 0.5, 1, 1},
    {"categorical-weak-d4-nointer-pareto7", 2, 0.9, 1, 1},
    {"categorical-weak-d4-nointer-pareto7", 2, 0.95, 1.0000000000000009, 1},
    {"categorical-weak-d4-nointer-pareto7", 2, 0.99, 1, 1},
    {"categorical-weak-d4-nointer-pareto7", 3, 0.5, -1, -1},
    {"categorical-weak-d4-nointer-pareto7", 3, 0.9, -1, -0.9999999999999991},
    {"categorical-weak-d4-nointer-pareto7", 3, 0.95, -1, -1},
    {"categorical-weak-d4-nointer-pareto7", 3, 0.99, -1, -1},
    {"categorical-weak-d4-nointer-pareto10", 2, 0.5, 1, 1},
    {"categorical-weak-d4-nointer-pareto10", 2, 0.9, 1, 1},
    {"categorical-weak-d4-nointer-pareto10", 2, 0.95, 0.9999999999999991, 0.9999999999999991},
    {"categorical-weak-d4-nointer-pareto10", 2, 0.99, 1, 1},
    {"categorical-weak-d4-nointer-pareto10", 3, 0.5, -0.9999999999999998, -1},
    {"categorical-weak-d4-nointer-pareto10", 3, 0.9, -1, -1},
    {"categorical-weak-d4-nointer-pareto10", 3, 0.95, -1, -1},
    {"categorical-weak-d4-nointer-pareto10", 3, 0.99, -1, -1},
    {"categorical-weak-d4-nointer-t3", 2, 0.5, 1, 0.9999999999999998},
    {"categorical-weak-d4-nointer-t3", 2, 0.9, 1, 1},
    {"categorical-weak-d4-nointer-t3", 2, 0.95, 1, 0.9999999999999982},
    {"categorical-weak-d4-nointer-t3", 2, 0.99, 1, 1},
    {"categorical-weak-d4-nointer-t3", 3, 0.5, -1, -1},
    {"categorical-weak-d4-nointer-t3", 3, 0.9, -1, -1},
    {"categorical-weak-d4-nointer-t3", 3, 0.95, -1, -1},
    {"categorical-weak-d4-nointer-t3", 3, 0.99, -1, -1},
    {"categorical-strong-d1-nointer-pareto5", 2, 0.5, 1, 1},
    {"categorical-strong-d1-nointer-pareto5", 2, 0.9, 1, 1},
    {"categorical-strong-d1-nointer-pareto5", 2, 0.95, 1, 1},
    {"categorical-strong-d1-nointer-pareto5", 2, 0.99, 1, 1},
    {"categorical-strong-d1-nointer-pareto5", 3, 0.5, -1, -1.0000000000000002},
    {"categorical-strong-d1-nointer-pareto5", 3, 0.9, -1, -1},
    {"categorical-strong-d1-nointer-pareto5", 3, 0.95, -1, -0.9999999999999996},
    {"categorical-strong-d1-nointer-pareto5", 3, 0.99, -1, -1},
    {"categorical-strong-d1-nointer-pareto7", 2, 0.5, 1, 1},
    {"categorical-strong-d1-nointer-pareto7", 2, 0.9, 1, 1},
    {"categorical-strong-d1-nointer-pareto7", 2, 0.95, 1, 1},
    {"categorical-strong-d1-nointer-pareto7", 2, 0.99, 1, 1},
    {"categorical-strong-d1-nointer-pareto7", 3, 0.5, -1, -0.9999999999999998},
    {"categorical-strong-d1-nointer-pareto7", 3, 0.9, -1, -0.9999999999999998},
    {"categorical-strong-d1-nointer-pareto7", 3, 0.95, -1, -1},
    {"categorical-strong-d1-nointer-pareto7", 3, 0.99, -1.0000000000000004, -1},
    {"categorical-strong-d1-nointer-pareto10", 2, 0.5, 1, 0.9999999999999998},
    {"categorical-strong-d1-nointer-pareto10", 2, 0.9, 1, 1},
    {"categorical-strong-d1-nointer-pareto10", 2, 0.95, 1, 0.9999999999999996},
    {"categorical-strong-d1-nointer-pareto10", 2, 0.99, 1, 1},
    {"categorical-strong-d1-nointer-pareto10", 3, 0.5, -1, -1},
    {"categorical-strong-d1-nointer-pareto10", 3, 0.9, -1.0000000000000004, -0.9999999999999998},
    {"categorical-strong-d1-nointer-pareto10", 3, 0.95, -1, -1},
    {"categorical-strong-d1-nointer-pareto10", 3, 0.99, -1, -1},
    {"categorical-strong-d1-nointer-t3", 2, 0.5, 1, 1},
    {"categorical-strong-d1-nointer-t3", 2, 0.9, 0.9999999999999996, 1},
    {"categorical-strong-d1-nointer-t3", 2, 0.95, 1, 1.0000000000000004},
    {"categorical-strong-d1-nointer-t3", 2, 0.99, 1, 1},
    {"categorical-strong-d1-nointer-t3", 3, 0.5, -1, -1},
    {"categorical-strong-d1-nointer-t3", 3, 0.9, -1, -1},
    {"categorical-strong-d1-nointer-t3", 3, 0.95, -1, -1},
    {"categorical-strong-d1-nointer-t3", 3, 0.99, -1, -1},
    {"categorical-strong-d4-nointer-pareto5", 2, 0.5, 1, 1},
    {"categorical-strong-d4-nointer-pareto5", 2, 0.9, 1, 1},
    {"categorical-strong-d4-nointer-pareto5", 2, 0.95, 0.9999999999999991, 1},
    {"categorical-strong-d4-nointer-pareto5", 2, 0.99, 1, 1},
    {"categorical-strong-d4-nointer-pareto5", 3, 0.5, -1.0000000000000002, -0.9999999999999996},
    {"categorical-strong-d4-nointer-pareto5", 3, 0.9, -1, -1},
    {"categorical-strong-d4-nointer-pareto5", 3, 0.95, -1, -1},
    {"categorical-strong-d4-nointer-pareto5", 3, 0.99, -1, -1},
    {"categorical-strong-d4-nointer-pareto7", 2, 0.5, 1, 1},
    {"categorical-strong-d4-nointer-pareto7", 2, 0.9, 1, 1},
    {"categorical-strong-d4-nointer-pareto7", 2, 0.95, 1.0000000000000009, 1},
    {"categorical-strong-d4-nointer-pareto7", 2, 0.99, 1, 1},
    {"categorical-strong-d4-nointer-pareto7", 3, 0.5, -1, -1.0000000000000002},
    {"categorical-strong-d4-nointer-pareto7", 3, 0.9, -1, -1.0000000000000004},
    {"categorical-strong-d4-nointer-pareto7", 3, 0.95, -1, -0.9999999999999991},
    {"categorical-strong-d4-nointer-pareto7", 3, 0.99, -1, -1},
    {"categorical-strong-d4-nointer-pareto10", 2, 0.5, 1, 1},
    {"categorical-strong-d4-nointer-pareto10", 2, 0.9, 1, 1},
    {"categorical-strong-d4-nointer-pareto10", 2, 0.95, 0.9999999999999991, 1},
    {"categorical-strong-d4-nointer-pareto10", 2, 0.99, 1, 1.0000000000000009},
    {"categorical-strong-d4-nointer-pareto10", 3, 0.5, -0.9999999999999998, -1},
    {"categorical-strong-d4-nointer-pareto10", 3, 0.9, -1, -1},
    {"categorical-strong-d4-nointer-pareto10", 3, 0.95, -1, -1},
    {"categorical-strong-d4-nointer-pareto10", 3, 0.99, -1, -1},
    {"categorical-strong-d4-nointer-t3", 2, 0.5, 1, 1},
    {"categorical-strong-d4-nointer-t3", 2, 0.9, 1, 1},
    {"categorical-strong-d4-nointer-t3", 2, 0.95, 1, 1},
    {"categorical-strong-d4-nointer-t3", 2, 0.99, 1, 1},
    {"categorical-strong-d4-nointer-t3", 3, 0.5, -1, -1},
    {"categorical-strong-d4-nointer-t3", 3, 0.9, -1, -0.9999999999999996},
    {"categorical-strong-d4-nointer-t3", 3, 0.95, -1, -1},
    {"categorical-strong-d4-nointer-t3", 3, 0.99, -1, -1},
    {"continuous-weak-d1-nointer-pareto5", 2, 0.5, 1, kNoValue},
    {"continuous-weak-d1-nointer-pareto5", 2, 0.9, 1, kNoValue},
    {"continuous-weak-d1-nointer-pareto5", 2, 0.95, 1, kNoValue},
    {"continuous-weak-d1-nointer-pareto5", 2, 0.99, 1, kNoValue},
    {"continuous-weak-d1-nointer-pareto7", 2, 0.5, 1, kNoValue},
    {"continuous-weak-d1-nointer-pareto7", 2, 0.9, 1, kNoValue},
    {"continuous-weak-d1-nointer-pareto7", 2, 0.95, 1, kNoValue},
    {"continuous-weak-d1-nointer-pareto7", 2, 0.99, 1, kNoValue},
    {"continuous-weak-d1-nointer-pareto10", 2, 0.5, 1, kNoValue},
    {"continuous-weak-d1-nointer-pareto10", 2, 0.9, 1, kNoValue},
    {"continuous-weak-d1-nointer-pareto10", 2, 0.95, 1, kNoValue},
    {"continuous-weak-d1-nointer-pareto10", 2, 0.99, 1, kNoValue},
    {"continuous-weak-d1-nointer-t3", 2, 0.5, 1, kNoValue},
    {"continuous-weak-d1-nointer-t3", 2, 0.9, 0.9999999999999996, kNoValue},
    {"continuous-weak-d1-nointer-t3", 2, 0.95, 1, kNoValue},
    {"continuous-weak-d1-nointer-t3", 2, 0.99, 1, kNoValue},
    {"continuous-weak-d4-nointer-pareto5", 2, 0.5, 1, kNoValue},
    {"continuous-weak-d4-nointer-pareto5", 2, 0.9, 1, kNoValue},
    {"continuous-weak-d4-nointer-pareto5", 2, 0.95, 0.9999999999999991, kNoValue},
    {"continuous-weak-d4-nointer-pareto5", 2, 0.99, 1, kNoValue},
    {"continuous-weak-d4-nointer-pareto7", 2, 0.5, 1, kNoValue},
    {"continuous-weak-d4-nointer-pareto7", 2, 0.9, 1, kNoValue},
    {"continuous-weak-d4-nointer-pareto7", 2, 0.95, 1.0000000000000009, kNoValue},
    {"continuous-weak-d4-nointer-pareto7", 2, 0.99, 1, kNoValue},
    {"continuous-weak-d4-nointer-pareto10", 2, 0.5, 1, kNoValue},
    {"continuous-weak-d4-nointer-pareto10", 2, 0.9, 1, kNoValue},
    {"continuous-weak-d4-nointer-pareto10", 2, 0.95, 0.9999999999999991, kNoValue},
    {"continuous-weak-d4-nointer-pareto10", 2, 0.99, 1, kNoValue},
    {"continuous-weak-d4-nointer-t3", 2, 0.5, 1, kNoValue},
    {"continuous-weak-d4-nointer-t3", 2, 0.9, 1, kNoValue},
    {"continuous-weak-d4-nointer-t3", 2, 0.95, 1, kNoValue},
    {"continuous-weak-d4-nointer-t3", 2, 0.99, 1, kNoValue},
    {"continuous-strong-d1-nointer-pareto5", 2, 0.5, 1, kNoValue},
    {"continuous-strong-d1-nointer-pareto5", 2, 0.9, 1, kNoValue},
    {"continuous-strong-d1-nointer-pareto5", 2, 0.95, 1, kNoValue},
    {"continuous-strong-d1-nointer-pareto5", 2, 0.99, 1, kNoValue},
    {"continuous-strong-d1-nointer-pareto7", 2, 0.5, 1, kNoValue},
    {"continuous-strong-d1-nointer-pareto7", 2, 0.9, 1, kNoValue},
    {"continuous-strong-d1-nointer-pareto7", 2, 0.95, 1, kNoValue},
    {"continuous-strong-d1-nointer-pareto7", 2, 0.99, 1, kNoValue},
    {"continuous-strong-d1-nointer-pareto10", 2, 0.5, 1, kNoValue},
    {"continuous-strong-d1-nointer-pareto10", 2, 0.9, 1, kNoValue},
    {"continuous-strong-d1-nointer-pareto10", 2, 0.95, 1, kNoValue},
    {"continuous-strong-d1-nointer-pareto10", 2, 0.99, 1, kNoValue},
    {"continuous-strong-d1-nointer-t3", 2, 0.5, 1, kNoValue},
    {"continuous-strong-d1-nointer-t3", 2, 0.9, 0.9999999999999996, kNoValue},
    {"continuous-strong-d1-nointer-t3", 2, 0.95, 1, kNoValue},
    {"continuous-strong-d1-nointer-t3", 2, 0.99, 1, kNoValue},
    {"continuous-strong-d4-nointer-pareto5", 2, 0.5, 1, kNoValue},
    {"continuous-strong-d4-nointer-pareto5", 2, 0.9, 1, kNoValue},
    {"continuous-strong-d4-nointer-pareto5", 2, 0.95, 0.9999999999999991, kNoValue},
    {"continuous-strong-d4-nointer-pareto5", 2, 0.99, 1, kNoValue},
    {"continuous-strong-d4-nointer-pareto7", 2, 0.5, 1, kNoValue},
    {"continuous-strong-d4-nointer-pareto7", 2, 0.9, 1, kNoValue},
    {"continuous-strong-d4-nointer-pareto7", 2, 0.95, 1.0000000000000009, kNoValue},
    {"continuous-strong-d4-nointer-pareto7", 2, 0.99, 1, kNoValue},
    {"continuous-strong-d4-nointer-pareto10", 2, 0.5, 1, kNoValue},
    {"continuous-strong-d4-nointer-pareto10", 2, 0.9, 1, kNoValue},
    {"continuous-strong-d4-nointer-pareto10", 2, 0.95, 0.9999999999999991, kNoValue},
    {"continuous-strong-d4-nointer-pareto10", 2, 0.99, 1, kNoValue},
    {"continuous-strong-d4-nointer-t3", 2, 0.5, 1, kNoValue},
    {"continuous-strong-d4-nointer-t3", 2, 0.9, 1, kNoValue},
    {"continuous-strong-d4-nointer-t3", 2, 0.95, 1, kNoValue},
    {"continuous-strong-d4-nointer-t3", 2, 0.99, 1, kNoValue},
};

inline constexpr std::size_t kFrozenOracleCount = 288;

}  // namespace wqte

#endif  // WQTE_ORACLE_CONSTANTS_HPP
