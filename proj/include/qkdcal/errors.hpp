#pragma once

#include <stdexcept>
#include <string>

namespace qkdcal {

// Raised when observed or transformed data cannot describe any probability
// distribution (outside the numeric clamp tolerance).
class infeasible_error : public std::runtime_error {
public:
    explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qkdcal
