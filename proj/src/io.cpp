#include "portarb/error.hpp"

#include <fstream>
#include <sstream>

namespace portarb
{

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad())
    throw IoError("error reading '" + path + "'");
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path + "' for writing");
  out << contents;
  out.flush();
  if (!out)
    throw IoError("error writing '" + path + "'");
}

}  // namespace portarb
