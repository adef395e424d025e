#ifndef RAMANECHO_ERRORS_HPP
#define RAMANECHO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ramanecho {

// Base class for all solver errors. `what()` carries the human-readable
// message; `stage()` names the protocol stage when one is known.
class SimError : public std::runtime_error {
public:
    explicit SimError(const std::string& msg, std::string stage = {})
      : std::runtime_error(stage.empty() ? msg : "[" + stage + "] " + msg),
        stage_(std::move(stage))
    {
    }
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

#define RAMANECHO_DEFINE_ERROR(Name)                                         \
    class Name : public SimError {                                           \
    public:                                                                  \
        explicit Name(const std::string& msg, std::string stage = {})        \
          : SimError(msg, std::move(stage))                                  \
        {                                                                    \
        }                                                                    \
    }

// signals
RAMANECHO_DEFINE_ERROR(GridTooCoarse);
RAMANECHO_DEFINE_ERROR(PulseClipped);
RAMANECHO_DEFINE_ERROR(InvalidWindow);

// ensemble
RAMANECHO_DEFINE_ERROR(UnnormalizableDistribution);
RAMANECHO_DEFINE_ERROR(PoleInSupport);
RAMANECHO_DEFINE_ERROR(PoleHit);
RAMANECHO_DEFINE_ERROR(AtAsymptote);

// spectral
RAMANECHO_DEFINE_ERROR(QuadratureNotConverged);
RAMANECHO_DEFINE_ERROR(BandwidthExceedsComb);
RAMANECHO_DEFINE_ERROR(DepthQuadratureNotConverged);
RAMANECHO_DEFINE_ERROR(DepthTooLowForAsymptotic);

// amr
RAMANECHO_DEFINE_ERROR(ScheduleInvalid);
RAMANECHO_DEFINE_ERROR(NoRootInBracket);
RAMANECHO_DEFINE_ERROR(WrongStage);

// mbsolver
RAMANECHO_DEFINE_ERROR(StepTooCoarse);
RAMANECHO_DEFINE_ERROR(UnstableGrowth);

// metrics
RAMANECHO_DEFINE_ERROR(ZeroInput);

// experiment
RAMANECHO_DEFINE_ERROR(ParseError);
RAMANECHO_DEFINE_ERROR(ValidationError);
RAMANECHO_DEFINE_ERROR(IoError);

#undef RAMANECHO_DEFINE_ERROR

} // namespace ramanecho

#endif
