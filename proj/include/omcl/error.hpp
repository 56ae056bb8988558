#pragma once

#include <stdexcept>
#include <string>

namespace omcl {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text (bad JSON, missing field, wrong type).
class ParseError : public Error {
public:
    using Error::Error;
};

// Structurally readable data that breaks a type invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Data referencing objects/locations outside the environment catalog.
class CatalogError : public Error {
public:
    using Error::Error;
};

} // namespace omcl
