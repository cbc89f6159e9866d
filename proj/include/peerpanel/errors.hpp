#pragma once

#include <stdexcept>
#include <string>

namespace peerpanel {

/// Root of every error the engine throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PEERPANEL_ERROR(Name)          \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

PEERPANEL_ERROR(PreconditionError);
PEERPANEL_ERROR(SchemaError);
PEERPANEL_ERROR(ConfigError);
PEERPANEL_ERROR(IoError);

// llm gateway
PEERPANEL_ERROR(BackendUnavailable);
PEERPANEL_ERROR(MalformedResponse);
PEERPANEL_ERROR(MockMiss);

// literature search
PEERPANEL_ERROR(SearchUnavailable);
PEERPANEL_ERROR(QuotaExceeded);

// agents
PEERPANEL_ERROR(ParseFailure);
PEERPANEL_ERROR(UnknownPersona);
PEERPANEL_ERROR(HumanTaskTimeout);

// evaluation and arena
PEERPANEL_ERROR(LengthMismatch);
PEERPANEL_ERROR(UnknownSystem);
PEERPANEL_ERROR(InsufficientSystems);

// corpus
PEERPANEL_ERROR(UnknownDecision);

#undef PEERPANEL_ERROR

}  // namespace peerpanel
