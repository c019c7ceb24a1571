// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

namespace madacc {

// Base class for every error the engine raises on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// corpus
struct MalformedAnnotation : Error { using Error::Error; };
struct OverlappingSpans : Error { using Error::Error; };
struct MissingEssayFile : Error { using Error::Error; };

// agents
struct TemplateError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct IncompleteTranscript : Error { using Error::Error; };

// backend
struct TransportError : Error { using Error::Error; };
struct AuthError : Error { using Error::Error; };
struct RefusalError : Error { using Error::Error; };
struct CacheError : Error { using Error::Error; };

// protocol
struct ManagerFailure : Error { using Error::Error; };
struct JudgeFailure : Error { using Error::Error; };

// metrics
struct DuplicateInstanceId : Error { using Error::Error; };
struct EmptyMatrix : Error { using Error::Error; };

// cli
struct UnknownInstanceId : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace madacc
