#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tbcavi/block_models.hpp"
#include "tbcavi/soft_assignment.hpp"

namespace tbcavi {

/// Probabilities are clamped into [kProbFloor, 1 - kProbFloor] before any log.
inline constexpr double kProbFloor = 1e-9;
/// Denominators below this trigger the empty-community fallback.
inline constexpr double kEmptyDenominator = 1e-12;
/// Degree parameter assigned to zero-degree nodes.
inline constexpr double kThetaFloor = 1e-6;

enum class Variant { bcavi, t_bcavi };
enum class Mode { general, planted };

/// Event counters raised instead of failing on degenerate states.
struct Diagnostics {
  std::size_t inverted = 0;         // p_hat <= q_hat
  std::size_t degenerate = 0;       // t == 0, lambda set to its limit q_hat
  std::size_t clamped = 0;          // a probability was clamped before a log
  std::size_t empty_community = 0;  // B entry kept from the previous iterate
  std::size_t theta_floor = 0;      // zero-degree node got kThetaFloor
  std::size_t rescale_skipped = 0;  // empty community during theta rescaling

  Diagnostics& operator+=(const Diagnostics& other);
  bool any() const;
  /// "inverted=2|clamped=1", empty when nothing fired.
  std::string to_string() const;
};

/// Two-parameter estimates used by the planted updates.
struct PlantedEstimates {
  double p_hat = 0.0;
  double q_hat = 0.0;
  double t = 0.0;
  double lambda = 0.0;
  bool inverted = false;
  bool degenerate = false;
};

struct IterationRecord {
  int iteration = 0;
  Membership labels;
  std::optional<SbmParams> params;           // general mode
  std::optional<PlantedEstimates> estimates;  // planted mode, or reported from Psi^(s-1)
  std::optional<double> elbo;                 // general mode only
  std::optional<double> accuracy;             // when truth is supplied
  Diagnostics diagnostics;
};

struct FitResult {
  Membership labels;
  SoftAssignment psi;
  std::optional<SbmParams> params;
  std::optional<PlantedEstimates> estimates;
  std::optional<DegreeParams> theta;
  std::vector<IterationRecord> trace;
  Diagnostics diagnostics;

  int iterations() const { return static_cast<int>(trace.size()); }
};

struct FitOptions {
  int iterations = 10;
  Variant variant = Variant::t_bcavi;
  Mode mode = Mode::general;
  // Stop t_bcavi early once thresholded labels stop changing.
  bool early_stop = false;
};

const char* to_string(Variant v);
const char* to_string(Mode m);

}  // namespace tbcavi
