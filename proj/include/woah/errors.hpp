#ifndef WOAH_ERRORS_HPP
#define WOAH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace woah {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input data (CoNLL-U, JSON, ...). Messages name the offending
// line or element.
class ParseError : public Error {
public:
    using Error::Error;
};

// Violated mathematical precondition (zero vector, df = 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Out-of-range or inconsistent configuration value.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Failure inside build_ontology, tagged with the stage that raised it.
class PipelineError : public Error {
public:
    PipelineError(std::string stage, const std::string& message)
        : Error(stage + ": " + message), stage_(std::move(stage)) {}

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace woah

#endif  // WOAH_ERRORS_HPP
