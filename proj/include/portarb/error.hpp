#ifndef PORTARB_ERROR_HPP_
#define PORTARB_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace portarb
{

/// Malformed input text: XML, condition syntax, scenario or trace files.
class ParseError : public std::runtime_error
{
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// File could not be read or written.
class IoError : public std::runtime_error
{
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace portarb

#endif  // PORTARB_ERROR_HPP_
