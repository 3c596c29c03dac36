#include "fdx/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fdx {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

bool parse_double(const std::string& token, double& out) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc{} && res.ptr == end && !token.empty();
}

}  // namespace

CsvMatrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot open " + path.string());

  CsvMatrix out;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(file, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto tokens = split_commas(line);

    if (first_content) {
      first_content = false;
      bool numeric = true;
      double v = 0.0;
      for (const auto& t : tokens)
        if (!parse_double(t, v)) {
          numeric = false;
          break;
        }
      out.cols = tokens.size();
      if (!numeric) {
        out.had_header = true;
        continue;
      }
    }

    if (tokens.size() != out.cols)
      throw CsvError("line " + std::to_string(line_no) + ": expected " + std::to_string(out.cols) +
                     " fields, got " + std::to_string(tokens.size()));
    for (std::size_t j = 0; j < tokens.size(); ++j) {
      double v = 0.0;
      if (!parse_double(tokens[j], v))
        throw CsvError("line " + std::to_string(line_no) + ", field " + std::to_string(j + 1) +
                       ": not a number: '" + tokens[j] + "'");
      out.values.push_back(v);
    }
    ++out.rows;
  }
  if (out.rows == 0) throw CsvError("no data rows in " + path.string());
  return out;
}

std::vector<std::string> read_value_tokens(const std::string& path_or_inline) {
  std::string content;
  if (path_or_inline.find(',') != std::string::npos) {
    content = path_or_inline;
  } else {
    std::ifstream file(path_or_inline);
    if (!file) throw IoError("cannot open " + path_or_inline);
    std::ostringstream buf;
    buf << file.rdbuf();
    content = buf.str();
  }
  std::vector<std::string> tokens;
  std::string current;
  for (char c : content + "\n") {
    if (c == ',' || c == '\n' || c == ' ' || c == '\t' || c == '\r') {
      if (!current.empty()) tokens.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  return tokens;
}

std::vector<std::uint8_t> parse_labels(const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw CsvError("no label tokens");
  const std::string first = tokens.front();
  std::string second;
  std::vector<std::uint8_t> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (t == first) {
      out.push_back(0);
    } else {
      if (second.empty()) second = t;
      if (t != second) throw CsvError("labels must take exactly two distinct values");
      out.push_back(1);
    }
  }
  if (second.empty()) throw CsvError("labels must contain both groups");
  return out;
}

std::vector<double> parse_doubles(const std::vector<std::string>& tokens) {
  std::vector<double> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    double v = 0.0;
    if (!parse_double(t, v)) throw CsvError("not a number: '" + t + "'");
    out.push_back(v);
  }
  return out;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path.string() + " for writing");
  file << content;
  file.flush();
  if (!file) throw IoError("failed writing " + path.string());
}

}  // namespace fdx
