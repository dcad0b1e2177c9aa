#pragma once

#include <stdexcept>
#include <string>

namespace bellnl {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidScenarioError : public Error { public: using Error::Error; };
class InvalidStrategyError : public Error { public: using Error::Error; };
class InvalidBehaviorError : public Error { public: using Error::Error; };
class IncompleteTableError : public Error { public: using Error::Error; };
class ScenarioMismatchError : public Error { public: using Error::Error; };
class StructuralError : public Error { public: using Error::Error; };
class EnumerationTooLargeError : public Error { public: using Error::Error; };
class SymmetryError : public Error { public: using Error::Error; };
class CommutationError : public Error { public: using Error::Error; };
class DimensionMismatchError : public Error { public: using Error::Error; };
class RationalizationError : public Error { public: using Error::Error; };
class UnboundedError : public Error { public: using Error::Error; };
class FormatError : public Error { public: using Error::Error; };

} // namespace bellnl
