#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace graspq {

// Base class for every error the library raises on purpose. CLI maps any
// Error to a nonzero exit; everything else is a bug.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

class DegenerateInput : public Error {
public:
    using Error::Error;
};

class DegenerateRange : public Error {
public:
    using Error::Error;
};

class MissingJacobian : public Error {
public:
    using Error::Error;
};

class MissingNormalization : public Error {
public:
    using Error::Error;
};

class InvalidThresholds : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& msg)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    explicit ParseError(const std::string& msg) : Error(msg), line_(0) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class DuplicateId : public Error {
public:
    using Error::Error;
};

class StratificationError : public Error {
public:
    using Error::Error;
};

class MissingFeature : public Error {
public:
    MissingFeature(const std::string& grasp_id, const std::string& metric)
        : Error("record '" + grasp_id + "' is missing metric '" + metric + "'"),
          grasp_id_(grasp_id),
          metric_(metric) {}
    const std::string& grasp_id() const { return grasp_id_; }
    const std::string& metric() const { return metric_; }

private:
    std::string grasp_id_;
    std::string metric_;
};

class UnsupportedModelVersion : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace graspq
