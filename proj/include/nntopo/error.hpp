#pragma once

#include <stdexcept>
#include <string>

namespace nntopo {

// Error categories map onto the CLI exit codes: usage 1, data 2, numerical 3.
class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nntopo
