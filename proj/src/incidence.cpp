#include "cellsom/incidence.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

namespace cellsom {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> tokens;
  for (std::string tok; ss >> tok;) tokens.push_back(std::move(tok));
  return tokens;
}

bool parse_count(const std::string& tok, std::size_t& out) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return false;
  try {
    out = std::stoull(tok);
  } catch (const std::out_of_range&) {
    return false;
  }
  return true;
}

bool is_permutation_of(std::span<const std::size_t> order, std::size_t n) {
  if (order.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (std::size_t i : order) {
    if (i >= n || seen[i]) return false;
    seen[i] = true;
  }
  return true;
}

}  // namespace

IncidenceMatrix::IncidenceMatrix(std::size_t parts, std::size_t machines,
                                 std::vector<std::uint8_t> entries)
    : parts_(parts), machines_(machines), entries_(std::move(entries)) {
  if (parts_ == 0 || machines_ == 0) throw Error("incidence matrix needs at least one part and one machine");
  if (entries_.size() != parts_ * machines_)
    throw DimensionError("incidence matrix has " + std::to_string(entries_.size()) +
                         " entries, expected " + std::to_string(parts_ * machines_));
  for (std::uint8_t v : entries_)
    if (v > 1) throw Error("incidence matrix entry is not 0 or 1");
  for (std::size_t p = 0; p < parts_; ++p) {
    auto r = row(p);
    if (std::find(r.begin(), r.end(), 1) == r.end())
      throw Error("part " + part_label(p) + " uses no machine");
  }
  for (std::size_t j = 0; j < machines_; ++j) {
    bool used = false;
    for (std::size_t p = 0; p < parts_ && !used; ++p) used = at(p, j) == 1;
    if (!used) throw Error("machine " + machine_label(j) + " is used by no part");
  }
}

std::vector<double> IncidenceMatrix::part_vector(std::size_t part) const {
  auto r = row(part);
  return {r.begin(), r.end()};
}

std::size_t IncidenceMatrix::ones() const noexcept {
  return static_cast<std::size_t>(std::count(entries_.begin(), entries_.end(), 1));
}

std::vector<std::string> IncidenceMatrix::part_labels() const {
  std::vector<std::string> out;
  for (std::size_t p = 0; p < parts_; ++p) out.push_back(part_label(p));
  return out;
}

std::vector<std::string> IncidenceMatrix::machine_labels() const {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < machines_; ++j) out.push_back(machine_label(j));
  return out;
}

IncidenceMatrix IncidenceMatrix::transposed() const {
  std::vector<std::uint8_t> t(entries_.size());
  for (std::size_t p = 0; p < parts_; ++p)
    for (std::size_t j = 0; j < machines_; ++j) t[j * parts_ + p] = at(p, j);
  return {machines_, parts_, std::move(t)};
}

IncidenceMatrix IncidenceMatrix::permuted(std::span<const std::size_t> part_order,
                                          std::span<const std::size_t> machine_order) const {
  if (!is_permutation_of(part_order, parts_) || !is_permutation_of(machine_order, machines_))
    throw DimensionError("permutation does not match matrix dimensions");
  std::vector<std::uint8_t> out;
  out.reserve(entries_.size());
  for (std::size_t i : part_order)
    for (std::size_t j : machine_order) out.push_back(at(i, j));
  return {parts_, machines_, std::move(out)};
}

IncidenceMatrix parse_matrix(std::istream& in, bool transpose) {
  std::size_t line_no = 0;
  std::size_t rows = 0, cols = 0;
  bool have_header = false;
  std::size_t header_line = 0;
  std::vector<std::uint8_t> entries;
  std::size_t rows_read = 0;

  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto tokens = split_ws(line);

    if (!have_header) {
      if (tokens.size() != 2 || !parse_count(tokens[0], rows) || !parse_count(tokens[1], cols))
        throw ParseError(line_no, "expected header with two integers 'P M'");
      if (rows == 0 || cols == 0) throw ParseError(line_no, "matrix dimensions must be positive");
      have_header = true;
      header_line = line_no;
      entries.reserve(rows * cols);
      continue;
    }
    if (rows_read == rows)
      throw ParseError(line_no, "dimension mismatch: more than " + std::to_string(rows) + " rows");
    if (rows_read == 0 && tokens.size() == 2 && tokens[0] == std::to_string(rows) &&
        tokens[1] == std::to_string(cols) && !(rows <= 1 && cols <= 1))
      throw ParseError(line_no, "duplicate header (first header at line " + std::to_string(header_line) + ")");
    if (tokens.size() != cols)
      throw ParseError(line_no, "dimension mismatch: expected " + std::to_string(cols) + " tokens, got " +
                                    std::to_string(tokens.size()));
    for (const auto& tok : tokens) {
      if (tok != "0" && tok != "1") throw ParseError(line_no, "non-binary token '" + tok + "'");
      entries.push_back(tok == "1" ? 1 : 0);
    }
    ++rows_read;
  }
  if (!have_header) throw ParseError(0, "missing header");
  if (rows_read != rows)
    throw ParseError(0, "dimension mismatch: expected " + std::to_string(rows) + " rows, got " +
                            std::to_string(rows_read));

  // Empty rows/columns are reported against the file's own orientation.
  for (std::size_t r = 0; r < rows; ++r) {
    bool any = false;
    for (std::size_t c = 0; c < cols; ++c) any |= entries[r * cols + c] == 1;
    if (!any) throw ParseError(0, "empty row " + std::to_string(r + 1));
  }
  for (std::size_t c = 0; c < cols; ++c) {
    bool any = false;
    for (std::size_t r = 0; r < rows; ++r) any |= entries[r * cols + c] == 1;
    if (!any) throw ParseError(0, "empty column " + std::to_string(c + 1));
  }

  IncidenceMatrix m(rows, cols, std::move(entries));
  return transpose ? m.transposed() : m;
}

IncidenceMatrix parse_matrix(const std::string& text, bool transpose) {
  std::istringstream in(text);
  return parse_matrix(in, transpose);
}

IncidenceMatrix load_matrix(const std::filesystem::path& path, bool transpose) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open matrix file '" + path.string() + "'");
  try {
    return parse_matrix(in, transpose);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path.string());
  }
}

std::string format_matrix(const IncidenceMatrix& m) {
  std::ostringstream out;
  out << m.parts() << ' ' << m.machines() << '\n';
  for (std::size_t p = 0; p < m.parts(); ++p) {
    for (std::size_t j = 0; j < m.machines(); ++j) out << (j ? " " : "") << int(m.at(p, j));
    out << '\n';
  }
  return out.str();
}

void BlockDiagonalView::validate(std::size_t parts, std::size_t machines) const {
  if (!is_permutation_of(row_order, parts))
    throw DimensionError("row order is not a permutation of " + std::to_string(parts) + " parts");
  if (!is_permutation_of(col_order, machines))
    throw DimensionError("column order is not a permutation of " + std::to_string(machines) + " machines");
  if (cells.empty()) throw DimensionError("block-diagonal view has no cells");
  std::size_t pr = 0, mc = 0;
  for (const auto& c : cells) {
    if (c.part_begin != pr || c.machine_begin != mc || c.part_end < c.part_begin ||
        c.machine_end < c.machine_begin)
      throw DimensionError("cell ranges are not contiguous");
    pr = c.part_end;
    mc = c.machine_end;
  }
  if (pr != parts || mc != machines) throw DimensionError("cell ranges do not cover the matrix");
}

BlockDiagonalView BlockDiagonalView::identity(std::size_t parts, std::size_t machines) {
  BlockDiagonalView v;
  v.row_order.resize(parts);
  v.col_order.resize(machines);
  std::iota(v.row_order.begin(), v.row_order.end(), std::size_t{0});
  std::iota(v.col_order.begin(), v.col_order.end(), std::size_t{0});
  v.cells.push_back({0, parts, 0, machines});
  return v;
}

std::string render_block_diagonal(const IncidenceMatrix& m, const BlockDiagonalView& view) {
  view.validate(m.parts(), m.machines());

  std::size_t label_w = 0, col_w = 1;
  for (std::size_t p : view.row_order) label_w = std::max(label_w, m.part_label(p).size());
  for (std::size_t j : view.col_order) col_w = std::max(col_w, m.machine_label(j).size());

  std::vector<bool> bar_before(m.machines() + 1, false);
  std::vector<bool> rule_before(m.parts() + 1, false);
  for (std::size_t c = 1; c < view.cells.size(); ++c) {
    bar_before[view.cells[c].machine_begin] = true;
    rule_before[view.cells[c].part_begin] = true;
  }
  // Boundaries at the extremes (empty leading/trailing ranges) are not drawn.
  bar_before[0] = bar_before[m.machines()] = false;
  rule_before[0] = rule_before[m.parts()] = false;

  auto pad_left = [](const std::string& s, std::size_t w) {
    return std::string(w > s.size() ? w - s.size() : 0, ' ') + s;
  };
  auto pad_right = [](const std::string& s, std::size_t w) {
    return s + std::string(w > s.size() ? w - s.size() : 0, ' ');
  };

  std::string out;
  std::string header = std::string(label_w, ' ');
  std::string rule = std::string(label_w, '-');
  for (std::size_t j = 0; j < m.machines(); ++j) {
    if (bar_before[j]) {
      header += " |";
      rule += "-+";
    }
    header += ' ' + pad_left(m.machine_label(view.col_order[j]), col_w);
    rule += std::string(col_w + 1, '-');
  }
  out += header + '\n';
  for (std::size_t i = 0; i < m.parts(); ++i) {
    if (rule_before[i]) out += rule + '\n';
    std::size_t p = view.row_order[i];
    std::string line = pad_right(m.part_label(p), label_w);
    for (std::size_t j = 0; j < m.machines(); ++j) {
      if (bar_before[j]) line += " |";
      line += ' ' + pad_left(std::to_string(m.at(p, view.col_order[j])), col_w);
    }
    out += line + '\n';
  }
  return out;
}

IncidenceMatrix problem1_matrix() {
  static const char* text =
      "10 10\n"
      "0 1 0 1 0 1 1 1 0 0\n"
      "0 1 0 1 0 1 1 1 0 0\n"
      "1 0 1 0 1 0 0 0 1 1\n"
      "1 0 1 0 1 0 0 0 1 1\n"
      "1 1 1 0 1 0 0 0 1 1\n"
      "1 0 1 0 1 0 0 0 1 1\n"
      "1 0 1 0 1 0 0 0 1 1\n"
      "1 0 1 0 1 0 0 0 1 1\n"
      "1 0 1 0 1 0 0 0 1 1\n"
      "0 1 0 1 0 1 1 1 0 1\n";
  return parse_matrix(std::string(text));
}

}  // namespace cellsom
