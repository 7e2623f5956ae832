#pragma once

#include <stdexcept>
#include <string>

namespace nodeforge {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An operation was called with arguments its contract forbids.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// ---- node model ----

class CycleError : public Error {
public:
    using Error::Error;
};

class DanglingDependencyError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    SchemaError(std::string path, const std::string& what)
        : Error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// A library or blueprint failed structural validation.
class ValidationError : public Error {
public:
    using Error::Error;
};

// ---- llm gateway ----

class ProviderError : public Error {
public:
    using Error::Error;
};

class MalformedOutputError : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

// ---- knowledge harvest ----

class EmptySourceError : public Error {
public:
    using Error::Error;
};

class SearchBackendError : public Error {
public:
    using Error::Error;
};

// ---- trajectory runtime ----

class MissingInputError : public Error {
public:
    using Error::Error;
};

class WiringError : public Error {
public:
    using Error::Error;
};

// ---- reward engine ----

class EmptyTargetError : public Error {
public:
    using Error::Error;
};

class AlphaRangeError : public Error {
public:
    using Error::Error;
};

class AlignmentError : public Error {
public:
    using Error::Error;
};

// ---- optimizer ----

class InterfaceDriftError : public Error {
public:
    using Error::Error;
};

// ---- cli / storage ----

class ConfigError : public Error {
public:
    using Error::Error;
};

class StorageError : public Error {
public:
    using Error::Error;
};

}  // namespace nodeforge
