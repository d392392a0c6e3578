#include "hessdamp/csv.hpp"

#include <charconv>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "hessdamp/error.hpp"

namespace hessdamp::csv {

namespace {

void write_comment(std::ostream& os, std::string_view comment) {
  while (!comment.empty()) {
    const auto nl = comment.find('\n');
    os << "# " << comment.substr(0, nl) << '\n';
    if (nl == std::string_view::npos) break;
    comment.remove_prefix(nl + 1);
  }
}

void write_point(std::ostream& os, const Point& x) {
  for (Index i = 0; i < x.size(); ++i) os << ',' << format_real(x[i]);
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

std::vector<std::string> coordinate_names(std::string_view prefix, Index dim) {
  std::vector<std::string> out;
  if (dim == 1) {
    out.emplace_back(prefix);
    return out;
  }
  for (Index i = 0; i < dim; ++i) out.push_back(std::string(prefix) + std::to_string(i + 1));
  return out;
}

void write_iterates(std::ostream& os, std::span<const IterateRecord> records, Index dim,
                    std::string_view comment) {
  write_comment(os, comment);
  os << "k";
  for (const auto& n : coordinate_names("x", dim)) os << ',' << n;
  os << ",value_error,grad_norm,dist,step,energy,n_grad_evals\n";
  for (const auto& r : records) {
    os << r.k;
    write_point(os, r.x);
    os << ',' << format_real(r.value_error) << ',' << format_real(r.grad_norm) << ',';
    if (r.dist) os << format_real(*r.dist);
    os << ',' << format_real(r.step) << ',';
    if (r.energy) os << format_real(*r.energy);
    os << ',' << r.grad_evals << '\n';
  }
}

void write_trajectory(std::ostream& os, std::span<const TrajectoryRecord> records, Index dim,
                      std::string_view comment) {
  write_comment(os, comment);
  os << "t";
  for (const auto& n : coordinate_names("x", dim)) os << ',' << n;
  for (const auto& n : coordinate_names("v", dim)) os << ',' << n;
  os << ",value_error,traj_error,speed,energy\n";
  for (const auto& r : records) {
    os << format_real(r.t);
    write_point(os, r.x);
    write_point(os, r.v);
    os << ',' << format_real(r.value_error) << ',' << format_real(r.traj_error) << ','
       << format_real(r.speed) << ',' << format_real(r.energy) << '\n';
  }
}

std::vector<double> Table::column(std::string_view name) const {
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == name) {
      std::vector<double> out;
      out.reserve(rows.size());
      for (const auto& row : rows) out.push_back(row[j]);
      return out;
    }
  }
  throw Error(ErrorCode::kParseError, "no column named '" + std::string(name) + "'");
}

Table read(std::istream& is) {
  Table t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + " has " +
                                              std::to_string(fields.size()) + " fields, expected " +
                                              std::to_string(t.header.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& field : fields) {
      if (field.empty()) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw Error(ErrorCode::kParseError,
                    "bad number '" + field + "' on line " + std::to_string(line_no));
      }
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw Error(ErrorCode::kParseError, "CSV has no header row");
  return t;
}

}  // namespace hessdamp::csv
