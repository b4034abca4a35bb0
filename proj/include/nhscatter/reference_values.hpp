#pragma once

#include <array>

namespace nhs::reference {

/// Reference singularities of the pure-imaginary barrier of unit width, with
/// the conic discriminant and the M coefficients A, B, H given in units of
/// 1e-5 (so A = a_scaled * 1e-5). The primed coefficients are listed equal.
struct UnitWidthRow {
  int index;
  double e_ss;
  double v_ss;
  double chi;
  double a_scaled;
  double b_scaled;
  double h_scaled;
};

inline constexpr double kTableScale = 1e-5;

inline constexpr std::array<UnitWidthRow, 10> kUnitWidth{{
    {1, 16.052461577163, 14.1104958749715, -2.83207e-5, 211.999, 417.192, -265.651},
    {2, 53.531490674672, 30.430864331205, -7.1323e-7, 30.6455, 62.5316, -23.0855},
    {3, 111.265616666905, 48.524980456215, -6.63487e-8, 9.29923, 18.4784, -4.88389},
    {4, 189.01989429134, 67.933020370195, -1.1295e-8, 3.86239, 7.46395, -1.54586},
    {5, 286.69487833905, 88.38604799591, -2.7397e-9, 1.91855, 3.61982, -0.618261},
    {6, 404.23765595182, 109.70756999454, -8.40342e-10, 1.07116, 1.9807, -0.288363},
    {7, 541.6162666414, 131.7726934002, -3.04622e-10, 0.649646, 1.18092, -0.149991},
    {8, 698.80974645375, 154.4882891468, -1.25157e-10, 0.419131, 0.750798, -0.0846404},
    {9, 875.8035169372, 177.78219065599, -5.66853e-11, 0.283713, 0.501777, -0.0508817},
    {10, 1072.5869864069, 201.5968028915, -2.77573e-11, 0.199567, 0.349016, -0.0321738},
}};

/// Complex barrier v1 + i v2 of width 10 with a singularity near E = 1256.
struct ComplexBarrierPoint {
  double v1;
  double width_b;
  double e_ss;
  double v2_ss;
};

inline constexpr ComplexBarrierPoint kComplexBarrier{6.15055, 10.0, 1256.158448057, 35.000000045};

}  // namespace nhs::reference
