#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "spmatch/alignment.hpp"
#include "spmatch/error.hpp"

namespace spmatch {

namespace {

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

void rstrip(std::string& s) {
  while (!s.empty() && s.back() == ' ') s.pop_back();
}

std::size_t parse_index(std::string_view text, std::size_t line) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw FormatError("expected a number, got '" + std::string(text) + "'", line);
  return value;
}

}  // namespace

std::string render(const Alignment& a) {
  const std::size_t nrows = a.rows.size();
  const std::size_t label_width = std::to_string(nrows == 0 ? 0 : nrows - 1).size();

  struct Span {
    std::size_t lo, hi;
  };
  std::vector<std::size_t> width(a.columns.size(), 1);
  std::vector<Span> span(a.columns.size());
  // text[r][c] is empty where row r has no cell in column c.
  std::vector<std::vector<std::string>> text(nrows, std::vector<std::string>(a.columns.size()));
  for (std::size_t c = 0; c < a.columns.size(); ++c) {
    span[c] = {nrows, 0};
    for (const auto& cell : a.columns[c].cells) {
      const auto& tok = a.symbol(cell).name();
      text[cell.row][c] = tok;
      width[c] = std::max(width[c], tok.size());
      span[c].lo = std::min(span[c].lo, cell.row);
      span[c].hi = std::max(span[c].hi, cell.row);
    }
  }

  auto bar_line = [&](auto covered) {
    std::string line(label_width + 1, ' ');
    for (std::size_t c = 0; c < a.columns.size(); ++c) {
      std::string field = covered(c) ? "|" : "";
      field.resize(width[c] + 1, ' ');
      line += field;
    }
    rstrip(line);
    return line;
  };

  std::ostringstream out;
  for (std::size_t r = 0; r < nrows; ++r) {
    if (r > 0)
      out << bar_line([&](std::size_t c) {
        return a.columns[c].is_hit() && span[c].lo <= r - 1 && span[c].hi >= r;
      }) << '\n';
    const std::string label = std::to_string(r);
    std::string line = pad_left(label, label_width) + " ";
    for (std::size_t c = 0; c < a.columns.size(); ++c) {
      std::string field = text[r][c];
      if (field.empty() && a.columns[c].is_hit() && span[c].lo < r && r < span[c].hi) field = "|";
      field.resize(width[c] + 1, ' ');
      line += field;
    }
    line += pad_left(label, label_width);
    out << line << '\n';
  }
  return out.str();
}

std::string dump(const Alignment& a) {
  std::ostringstream out;
  for (std::size_t r = 0; r < a.rows.size(); ++r)
    out << "row " << r << ' ' << a.rows[r]->id << ' ' << a.rows[r].appearance << ": "
        << to_text(a.rows[r]->symbols) << '\n';
  for (std::size_t c = 0; c < a.columns.size(); ++c) {
    out << c << ": ";
    for (std::size_t k = 0; k < a.columns[c].cells.size(); ++k) {
      if (k > 0) out << ',';
      out << a.columns[c].cells[k].row << '@' << a.columns[c].cells[k].pos;
    }
    out << '\n';
  }
  return out.str();
}

Alignment parse_dump(std::string_view text) {
  Alignment a;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw FormatError("missing ':'", lineno);
    const std::string head = line.substr(0, colon);
    const std::string body = line.substr(colon + 1);
    if (head.rfind("row ", 0) == 0) {
      std::istringstream h(head.substr(4));
      std::string index, id, appearance;
      if (!(h >> index >> id >> appearance)) throw FormatError("row header needs index, id and appearance", lineno);
      if (parse_index(index, lineno) != a.rows.size()) throw FormatError("rows must be numbered in order", lineno);
      if (!a.columns.empty()) throw FormatError("row lines must precede column lines", lineno);
      auto symbols = to_symbols(body);
      if (symbols.empty()) throw FormatError("row has no symbols", lineno);
      Row row;
      row.pattern = std::make_shared<const Pattern>(id, std::move(symbols), 1);
      row.appearance = parse_index(appearance, lineno);
      row.is_new = a.rows.empty();
      a.rows.push_back(std::move(row));
      continue;
    }
    if (parse_index(head, lineno) != a.columns.size()) throw FormatError("columns must be numbered in order", lineno);
    Column column;
    std::istringstream cells(body);
    std::string item;
    while (std::getline(cells, item, ',')) {
      const auto first = item.find_first_not_of(' ');
      const auto last = item.find_last_not_of(" \r");
      if (first == std::string::npos) throw FormatError("empty cell", lineno);
      item = item.substr(first, last - first + 1);
      const auto at = item.find('@');
      if (at == std::string::npos) throw FormatError("cell must read row@pos", lineno);
      const Cell cell{parse_index(std::string_view(item).substr(0, at), lineno),
                      parse_index(std::string_view(item).substr(at + 1), lineno)};
      if (cell.row >= a.rows.size() || cell.pos >= a.rows[cell.row]->size())
        throw FormatError("cell " + item + " is out of range", lineno);
      column.cells.push_back(cell);
    }
    if (column.cells.empty()) throw FormatError("column has no cells", lineno);
    a.columns.push_back(std::move(column));
  }
  if (a.rows.empty()) throw FormatError("dump has no rows");
  return a;
}

}  // namespace spmatch
