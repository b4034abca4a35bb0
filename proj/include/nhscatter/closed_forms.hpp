#pragma once

// Closed-form derivative expressions for the pure-imaginary barrier, evaluated
// term by term and compared with finite differences. Several of them disagree
// with the numeric derivatives, so the comparison is a report only: nothing
// here passes or fails.

#include <string>
#include <vector>

#include "nhscatter/finder.hpp"

namespace nhs {

struct ClosedFormEntry {
  std::string name;
  double numeric_value = 0;
  double closed_form_value = 0;
  double relative_discrepancy = 0;  // |closed - numeric| / max(|numeric|, tiny)
};

struct ClosedFormReport {
  std::vector<ClosedFormEntry> entries;

  const ClosedFormEntry* find(const std::string& name) const;
};

namespace closed_form {

// Each takes (E, V, b) for the barrier iV.
double d2q1_de2(double e, double v, double b);
double d2q2_de2(double e, double v, double b);
double d2q3_de2(double e, double v, double b);
double d2q4_de2(double e, double v, double b);
double d2m_dv2(double e, double v, double b);
double d2m_dedv(double e, double v, double b);
double g_terms(int i, double e, double v, double b);  // g1..g5
double dp_de(double e, double v, double b);           // G1
double dp_dv(double e, double v, double b);           // G2

}  // namespace closed_form

/// Relations A' = -C G1/P^2 + A/P, B' = -D G2/P^2 + B/P,
/// H' = H/P - (C G2 + D G1)/P^2 given M-coefficients and P derivatives.
struct PrimedRelation {
  double a_prime = 0;
  double b_prime = 0;
  double h_prime = 0;
};
PrimedRelation primed_from_relations(double a, double b, double h, double c, double d,
                                     double g1, double g2, double p);

/// Pure-imaginary singularities only (ss.v1_fixed == 0).
ClosedFormReport closed_form_cross_check(const SpectralSingularity& ss);

}  // namespace nhs
