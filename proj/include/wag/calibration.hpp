#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wag/hbm.hpp"

namespace wag {

struct TauCurve {
  std::vector<double> alphas;  // strictly increasing, positive
  std::vector<double> taus;
  std::string label;
};

enum class CalibrationStage { Population, Individual };

struct CurvePair {
  TauCurve preserve;  // tau(previous-stage means, posterior means)
  TauCurve align;     // tau(observed R, posterior means)
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// Thrown when one of the curve pairs never crosses; carries the curves for
// diagnosis.
class CalibrationError : public Error {
 public:
  CalibrationError(const std::string& what, CurvePair curves)
      : Error(what), curves_(std::move(curves)) {}
  const CurvePair& curves() const { return curves_; }

 private:
  CurvePair curves_;
};

// Average rank-agreement curves over every graph node with at least 2 valid
// neighbors at the stage's evidence level. For the individual stage the
// average also runs over subject_sample and cfg.alpha_pop is held fixed.
CurvePair tau_curves(CalibrationStage stage, const KnowledgeGraph& graph,
                     const std::vector<SubjectData>& cohort,
                     const std::vector<std::string>& subject_sample,
                     const std::vector<double>& alpha_grid, const HbmConfig& cfg);

// First sign change of (preserve - align); the root by linear interpolation
// between the bracketing grid points. nullopt when the curves never cross.
std::optional<double> find_intersection(const TauCurve& preserve, const TauCurve& align);

struct CalibrationResult {
  double alpha_pop = 0.0;
  double alpha_ind = 0.0;
  CurvePair population;
  CurvePair individual;
};

// Population stage first; alpha_pop is then frozen for the individual stage.
CalibrationResult calibrate(const KnowledgeGraph& graph,
                            const std::vector<SubjectData>& cohort,
                            const std::vector<double>& alpha_grid, const HbmConfig& cfg);

// Log-spaced grid, endpoints inclusive.
std::vector<double> log_grid(double lo, double hi, int points);

// "alpha,tau_preserve,tau_align,stage" rows for both stages.
std::string curves_csv(const CurvePair& population, const CurvePair& individual);

}  // namespace wag
