#pragma once

#include <stdexcept>
#include <string>

namespace acsheet {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define ACSHEET_ERROR(NAME)                    \
  struct NAME : Error {                        \
    using Error::Error;                        \
    NAME() : Error(#NAME) {}                   \
  }

// grid / noise
ACSHEET_ERROR(NonIntegralStepCount);
ACSHEET_ERROR(DegenerateGrid);
ACSHEET_ERROR(CellOutOfRange);
ACSHEET_ERROR(NonIntegralShift);

// kernel
ACSHEET_ERROR(NonpositiveTime);
ACSHEET_ERROR(ExponentOutOfRange);

// drift
ACSHEET_ERROR(EvenDegree);
ACSHEET_ERROR(NonnegativeLeadingCoefficient);

// stochastic convolution
ACSHEET_ERROR(StepMisalignment);
ACSHEET_ERROR(EnsembleTooSmall);

// solver
ACSHEET_ERROR(StabilityGuardViolated);
ACSHEET_ERROR(GridMismatch);
ACSHEET_ERROR(TestFunctionBoundaryViolation);

// dynamics experiments
ACSHEET_ERROR(UnboundedInitialSet);
ACSHEET_ERROR(BetaBelowThreshold);
ACSHEET_ERROR(DegeneratePair);
ACSHEET_ERROR(InsufficientSamples);

// inequality checks
ACSHEET_ERROR(BoundaryConditionViolated);

// cli / config
ACSHEET_ERROR(ConfigInvalid);

#undef ACSHEET_ERROR

}  // namespace acsheet
