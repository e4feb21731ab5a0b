#include "hetreg/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "hetreg/errors.hpp"

namespace hetreg {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_field(const std::string& field, long line_no) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw parse_error("malformed float '" + field + "'", line_no);
  }
  return value;
}

}  // namespace

void write_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  for (Index j = 0; j < ds.d(); ++j) out << "x" << (j + 1) << ",";
  out << "y\n";
  for (Index i = 0; i < ds.n(); ++i) {
    for (Index j = 0; j < ds.d(); ++j) {
      out << format_double(ds.X(i, j)) << ",";
    }
    out << format_double(ds.y[i]) << "\n";
  }
  if (!out) throw io_error("write failure on '" + path + "'");
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line)) throw parse_error("missing header", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split_fields(line);
  if (header.size() < 2 || header.back() != "y") {
    throw parse_error("expected final column 'y', got '" +
                          (header.empty() ? std::string() : header.back()) + "'",
                      1);
  }
  const Index d = static_cast<Index>(header.size()) - 1;
  for (Index j = 0; j < d; ++j) {
    const std::string expect = "x" + std::to_string(j + 1);
    if (header[static_cast<std::size_t>(j)] != expect) {
      throw parse_error("expected column '" + expect + "', got '" +
                            header[static_cast<std::size_t>(j)] + "'",
                        1);
    }
  }

  std::vector<std::vector<double>> rows;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != static_cast<std::size_t>(d) + 1) {
      throw parse_error("expected " + std::to_string(d + 1) + " fields, got " +
                            std::to_string(fields.size()),
                        line_no);
    }
    std::vector<double> row(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
      row[j] = parse_field(fields[j], line_no);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw parse_error("dataset has no sample rows", line_no);

  Dataset ds;
  ds.X.resize(static_cast<Index>(rows.size()), d);
  ds.y.resize(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (Index j = 0; j < d; ++j) {
      ds.X(static_cast<Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    }
    ds.y[static_cast<Index>(i)] = rows[i].back();
  }
  return ds;
}

}  // namespace hetreg
