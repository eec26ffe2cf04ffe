#include "strucimp/error.hpp"

namespace strucimp {

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(ErrorKind::Data, "line " + std::to_string(line) + ": " + what), line_(line), detail_(what) {}

}  // namespace strucimp
