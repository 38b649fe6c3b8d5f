#pragma once

#include <stdexcept>
#include <string>

namespace socsim {

/// Base class for every error raised by the engine and its modules.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// -- provider / parsing errors ------------------------------------------------

class ProviderUnavailable : public Error {
public:
    using Error::Error;
};

/// A provider answered, but the payload could not be interpreted or was out of
/// range. The raw text is preserved for postmortems.
class MalformedPolicyOutput : public Error {
public:
    MalformedPolicyOutput(const std::string& what, std::string raw = {})
        : Error(what), raw_output(std::move(raw)) {}
    std::string raw_output;
};

class ParserUnavailable : public ProviderUnavailable {
public:
    using ProviderUnavailable::ProviderUnavailable;
};

class MalformedParserOutput : public Error {
public:
    using Error::Error;
};

class PolicyUnavailable : public ProviderUnavailable {
public:
    using ProviderUnavailable::ProviderUnavailable;
};

class TemplateError : public Error {
public:
    using Error::Error;
};

// -- crowd generation ---------------------------------------------------------

class EncoderMismatch : public Error {
public:
    using Error::Error;
};

class ScorerOutOfRange : public Error {
public:
    using Error::Error;
};

class EmptyCandidatePool : public Error {
public:
    using Error::Error;
};

// -- opinion dynamics ---------------------------------------------------------

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class SeriesTooShort : public Error {
public:
    using Error::Error;
};

// -- engine -------------------------------------------------------------------

class EmptyCrowd : public Error {
public:
    using Error::Error;
};

class MissingScheduleEntry : public Error {
public:
    using Error::Error;
};

/// Raised when a run aborts mid-way (typically a provider failure); carries the
/// timestep so partial runs are never mistaken for complete ones.
class RunAborted : public Error {
public:
    RunAborted(int timestep, const std::string& phase, const std::string& cause)
        : Error("run aborted at t=" + std::to_string(timestep) + " during " + phase +
                ": " + cause),
          timestep(timestep), phase(phase) {}
    int timestep;
    std::string phase;
};

// -- metrics ------------------------------------------------------------------

class EmptyInput : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class AllComponentsSkipped : public Error {
public:
    using Error::Error;
};

class TooFewRuns : public Error {
public:
    using Error::Error;
};

class HorizonMismatch : public Error {
public:
    using Error::Error;
};

// -- files --------------------------------------------------------------------

class FileError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

} // namespace socsim
