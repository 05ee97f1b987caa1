// Copyright 2026 the gpsamp authors
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

#ifndef GPSAMP_TRUSS_HPP
#define GPSAMP_TRUSS_HPP

#include <array>
#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "gpsamp/errors.hpp"

namespace gpsamp {

// Planar ten-bar cantilever: two bays of width L and fixed height 1 m, six
// nodes, pin supports on the two leftmost nodes. Node 3 is the lower free
// corner (tip bottom); the reported output is its downward vertical
// displacement. Loads: P1 acts horizontally at the mid bottom node pointing
// toward the supports, P2 acts downward at the mid top node, P3 downward at
// node 3.
//
// Units follow the benchmark tables: loads in kN, E in GPa, L in m, areas in
// 1e-4 m^2; the returned displacement is in meters, downward positive.
class TrussModel {
 public:
  static constexpr int kNodes = 6;
  static constexpr int kMembers = 10;
  static constexpr double kHeight = 1.0;  // m

  // node order: 0 support-top, 1 support-bottom, 2 mid-top, 3 mid-bottom,
  //             4 tip-top, 5 tip-bottom ("node 3" of the benchmark)
  // member order = area index A1..A10
  static constexpr std::array<std::pair<int, int>, kMembers> members() {
    return {{{2, 5},    // A1  descending outer diagonal (mid-top -> tip-bot)
             {2, 4},    // A2  top outer chord
             {1, 3},    // A3  bottom inner chord
             {2, 3},    // A4  mid vertical
             {4, 5},    // A5  tip vertical
             {0, 3},    // A6  descending inner diagonal (sup-top -> mid-bot)
             {3, 5},    // A7  bottom outer chord
             {1, 2},    // A8  ascending inner diagonal (sup-bot -> mid-top)
             {3, 4},    // A9  ascending outer diagonal (mid-bot -> tip-top)
             {0, 2}}};  // A10 top inner chord
  }

  // reduced 8x8 stiffness over the free nodes 2..5, SI units
  static Eigen::Matrix<double, 8, 8> stiffness(double E_pa, double L_m,
                                               const double* areas_m2) {
    const double nx[kNodes] = {0, 0, L_m, L_m, 2 * L_m, 2 * L_m};
    const double ny[kNodes] = {kHeight, 0, kHeight, 0, kHeight, 0};
    Eigen::Matrix<double, 8, 8> K = Eigen::Matrix<double, 8, 8>::Zero();
    const auto mem = members();
    for (int m = 0; m < kMembers; ++m) {
      const auto [i, j] = mem[m];
      const double dx = nx[j] - nx[i], dy = ny[j] - ny[i];
      const double len = std::hypot(dx, dy);
      const double c = dx / len, s = dy / len;
      const double k = E_pa * areas_m2[m] / len;
      const double kl[2][2] = {{c * c, c * s}, {c * s, s * s}};
      const int nodes[2] = {i, j};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          if (nodes[a] < 2 || nodes[b] < 2) continue;  // pinned supports
          const double sgn = (a == b) ? 1.0 : -1.0;
          for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q)
              K(dof(nodes[a], p), dof(nodes[b], q)) += sgn * k * kl[p][q];
        }
    }
    return K;
  }

  static int dof(int node, int xy) { return (node - 2) * 2 + xy; }

  // full solve; forces in Newtons over the free dofs
  static Eigen::Matrix<double, 8, 1> solve(
      double E_pa, double L_m, const double* areas_m2,
      const Eigen::Matrix<double, 8, 1>& F) {
    const auto K = stiffness(E_pa, L_m, areas_m2);
    Eigen::LLT<Eigen::Matrix<double, 8, 8>> llt(K);
    if (llt.info() != Eigen::Success)
      throw SingularStiffness("TrussModel: stiffness not positive definite");
    return llt.solve(F);
  }
};

// Downward vertical displacement (m) at node 3 under loads in kN, E in GPa,
// L in m, areas in 1e-4 m^2.
inline double truss_displacement(double P1_kn, double P2_kn, double P3_kn,
                                 double E_gpa, double L_m,
                                 const double* areas_e4) {
  require(E_gpa > 0 && L_m > 0, "truss_displacement: E and L must be positive");
  double a_m2[TrussModel::kMembers];
  for (int m = 0; m < TrussModel::kMembers; ++m) {
    require(areas_e4[m] > 0, "truss_displacement: areas must be positive");
    a_m2[m] = areas_e4[m] * 1e-4;
  }
  Eigen::Matrix<double, 8, 1> F = Eigen::Matrix<double, 8, 1>::Zero();
  F(TrussModel::dof(3, 0)) -= P1_kn * 1e3;  // horizontal toward supports
  F(TrussModel::dof(2, 1)) -= P2_kn * 1e3;  // downward at mid top
  F(TrussModel::dof(5, 1)) -= P3_kn * 1e3;  // downward at node 3
  const auto u = TrussModel::solve(E_gpa * 1e9, L_m, a_m2, F);
  return -u(TrussModel::dof(5, 1));
}

// Weighted compromise of total cross-section area and node-3 displacement,
// with P, E, L fixed at their benchmark means:
//   0.6 * (sum A / 200) + 0.4 * (u3 / 0.03), areas in 1e-4 m^2.
inline double truss_weighted_objective(const double* areas_e4) {
  double sum_a = 0.0;
  for (int m = 0; m < TrussModel::kMembers; ++m) sum_a += areas_e4[m];
  const double u3 = truss_displacement(60.0, 40.0, 10.0, 200.0, 1.0, areas_e4);
  return 0.6 * (sum_a / 200.0) + 0.4 * (u3 / 0.03);
}

}  // namespace gpsamp

#endif
