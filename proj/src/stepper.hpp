#pragma once

#include "explicit_terms.hpp"
#include "glnematic/gl_dynamics.hpp"

namespace glnematic::detail {

bool finite(const Field& f);
/// Throws BlowUpError when `after` holds NaN or Inf.
void check_finite(const SimState& before, const SimState& after);
double next_time(const SimState& s, double dt);

class Stepper {
 public:
  virtual ~Stepper() = default;
  virtual SimState advance(const SimState& in) = 0;
};

/// Reusable workspace for repeated first-order IMEX steps with fixed parameters.
class ImexStepper final : public Stepper {
 public:
  explicit ImexStepper(const SimParams& params);
  SimState advance(const SimState& in) override;

 private:
  SimParams params_;
  SpectralGrid grid_;
  ExplicitTerms terms_;
  double dt_;
  double keep_d_ = 1.0;
  AlignedVector<double> inv_v_, inv_d_;
};

class Rk4Stepper final : public Stepper {
 public:
  explicit Rk4Stepper(const SimParams& params);
  SimState advance(const SimState& in) override;

 private:
  void rhs(const Field& v, const Field& d, Field& dv, Field& dd);

  SimParams params_;
  SpectralGrid grid_;
  ExplicitTerms terms_;
  double dt_;
};

RunResult run_with(Stepper& stepper, const SimParams& params, const SimState& init,
                   long sample_every, const RunObserver& observer);

}  // namespace glnematic::detail
