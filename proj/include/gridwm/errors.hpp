#pragma once

#include <stdexcept>
#include <string>

namespace gridwm {

// Base for all domain errors so callers can catch the whole family.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define GRIDWM_ERROR(NAME)                                  \
  struct NAME : Error {                                     \
    explicit NAME(const std::string& msg) : Error(msg) {}   \
  }

// gridworld
GRIDWM_ERROR(MissingSubject);
GRIDWM_ERROR(Occupied);
GRIDWM_ERROR(OutOfBounds);

// tokencodec
GRIDWM_ERROR(OutOfVocab);
GRIDWM_ERROR(InvalidTokenId);
GRIDWM_ERROR(WrongLength);
GRIDWM_ERROR(DimensionMismatch);

// seqmodel
GRIDWM_ERROR(ShapeMismatch);
GRIDWM_ERROR(NonFiniteLoss);

// probes
GRIDWM_ERROR(NoDistinctAction);

// verify / eval
GRIDWM_ERROR(VocabMismatch);
GRIDWM_ERROR(InfeasibleAction);

// experiment orchestration
GRIDWM_ERROR(MissingDependency);
GRIDWM_ERROR(ConfigInvalid);
GRIDWM_ERROR(HashMismatch);

#undef GRIDWM_ERROR

}  // namespace gridwm
