#include "srheat/error.hpp"

#include <utility>

namespace srheat {

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected,
                       const std::string &message)
    : Error(message), offset_(offset), expected_(std::move(expected)) {}

UnknownIdentifierError::UnknownIdentifierError(std::size_t offset, std::string name)
    : Error("unknown identifier \"" + name + "\" at offset " + std::to_string(offset)),
      offset_(offset), name_(std::move(name)) {}

DegenerateFrameError::DegenerateFrameError(const std::string &message,
                                           double condition_number)
    : Error(message), condition_number_(condition_number) {}

ToleranceError::ToleranceError(const std::string &message, double achieved_error)
    : Error(message), achieved_error_(achieved_error) {}

} // namespace srheat
