#ifndef HETREG_CSV_HPP
#define HETREG_CSV_HPP

#include <string>

#include "hetreg/model.hpp"

namespace hetreg {

// Shortest representation with 17 significant digits; doubles survive the
// round trip bit-exactly.
std::string format_double(double value);

// Dataset CSV: header "x1,...,xd,y", one row per sample.
void write_dataset(const Dataset& ds, const std::string& path);
Dataset read_dataset(const std::string& path);

}  // namespace hetreg

#endif  // HETREG_CSV_HPP
