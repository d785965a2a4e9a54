#include "syncnet/errors.hpp"

namespace syncnet {

void throw_dimension(const std::string& what) { throw DimensionError(what); }

void throw_parameter(const std::string& what) { throw ParameterError(what); }

}  // namespace syncnet
