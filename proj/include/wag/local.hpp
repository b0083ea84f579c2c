#pragma once

#include <map>
#include <string>
#include <vector>

#include "wag/dates.hpp"
#include "wag/graph.hpp"
#include "wag/subject.hpp"

namespace wag {

struct AbnormalityScore {
  double raw = 0.0;         // mean |z| over present window days
  double normalized = 0.0;  // min(raw / 3, 1)
  int observed_count = 0;   // present days inside the window
  bool valid = false;
};

// Mean absolute z-score over the window [t-k+1, t], against the historical
// mean/sd of the whole series. Only present days contribute; the divisor is
// the present-day count. sd = 0 makes every term 0. No present days in the
// window -> valid = false.
AbnormalityScore abnormality(const MetricSeries& series, Date t, int k);

// (2*eta - 1) * zeta + (1 - eta); equivalently eta*zeta + (1-eta)*(1-zeta).
double short_term_weight(double zeta, double eta);

// squash(gamma_local * (2*w_short - 1)); neutral 0.5 maps to 0.5.
double local_weight(double w_short, double gamma_local);

struct LocalWeight {
  double zeta = 0.0;  // normalized; 0 when invalid
  double w_local = 0.5;
  bool valid = false;
};

// Per neighbor: abnormality -> short_term_weight -> local_weight. Textual or
// fully-missing neighbors are scored from zeta = 0 and flagged invalid.
std::map<std::string, LocalWeight> local_weights_for_node(
    const SubjectData& subject, const std::vector<Neighbor>& neighbors, Date t, int k,
    double eta, double gamma_local);

}  // namespace wag
