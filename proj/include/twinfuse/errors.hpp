#pragma once

#include <stdexcept>
#include <string>

namespace twinfuse {

/// Base class for all twinfuse errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// -- dataset ----------------------------------------------------------------

class NotWav : public Error { public: using Error::Error; };
class UnsupportedFormat : public Error { public: using Error::Error; };
class Truncated : public Error { public: using Error::Error; };
class NotPnm : public Error { public: using Error::Error; };
class BadHeader : public Error { public: using Error::Error; };
class ParseError : public Error { public: using Error::Error; };
class DanglingTwin : public Error { public: using Error::Error; };
class DuplicateSubject : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };

// -- speech frontend ----------------------------------------------------------

class TooShort : public Error { public: using Error::Error; };
class BadFftSize : public Error { public: using Error::Error; };
class BandTooNarrow : public Error { public: using Error::Error; };

// -- dtw ----------------------------------------------------------------------

class EmptySequence : public Error { public: using Error::Error; };
class EmptyGallery : public Error { public: using Error::Error; };

// -- gabor ---------------------------------------------------------------------

class BadSize : public Error { public: using Error::Error; };
class ImageTooSmall : public Error { public: using Error::Error; };

// -- dcva ------------------------------------------------------------------------

class DegenerateClasses : public Error { public: using Error::Error; };
class DimensionMismatch : public Error { public: using Error::Error; };

// -- fusion / evaluation -----------------------------------------------------------

class IdMismatch : public Error { public: using Error::Error; };
class BadWeights : public Error { public: using Error::Error; };
class UnknownIdentity : public Error { public: using Error::Error; };
class MissingTwin : public Error { public: using Error::Error; };

// -- feature store ------------------------------------------------------------------

class NotFound : public Error { public: using Error::Error; };
class CorruptEntry : public Error { public: using Error::Error; };

// -- config / misc preconditions ----------------------------------------------------

class ConfigError : public Error { public: using Error::Error; };
class InvalidArgument : public Error { public: using Error::Error; };

} // namespace twinfuse
