#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dimred/core.hpp"
#include "dimred/csv.hpp"

namespace dimred {

// Streaming JSON writer with insertion-ordered keys and numbers formatted at
// 17 significant digits. Output is byte-deterministic for identical inputs,
// and doubles round-trip exactly through the text.
class JsonWriter {
 public:
  JsonWriter& begin_object() {
    separator();
    out_ += '{';
    stack_.push_back(false);
    return *this;
  }
  JsonWriter& end_object() {
    out_ += '}';
    stack_.pop_back();
    mark_value();
    return *this;
  }
  JsonWriter& begin_array() {
    separator();
    out_ += '[';
    stack_.push_back(false);
    return *this;
  }
  JsonWriter& end_array() {
    out_ += ']';
    stack_.pop_back();
    mark_value();
    return *this;
  }
  JsonWriter& key(const std::string& k) {
    separator();
    write_string(k);
    out_ += ':';
    pending_key_ = true;
    return *this;
  }
  JsonWriter& value(double v) {
    separator();
    if (std::isfinite(v)) {
      out_ += format_number(v);
    } else {
      out_ += "null";
    }
    mark_value();
    return *this;
  }
  JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(std::int64_t v) {
    separator();
    out_ += std::to_string(v);
    mark_value();
    return *this;
  }
  JsonWriter& value(std::uint64_t v) {
    separator();
    out_ += std::to_string(v);
    mark_value();
    return *this;
  }
  JsonWriter& value(bool v) {
    separator();
    out_ += v ? "true" : "false";
    mark_value();
    return *this;
  }
  JsonWriter& value(const std::string& v) {
    separator();
    write_string(v);
    mark_value();
    return *this;
  }
  JsonWriter& value(const char* v) { return value(std::string(v)); }
  JsonWriter& null_value() {
    separator();
    out_ += "null";
    mark_value();
    return *this;
  }

  template <class T>
  JsonWriter& kv(const std::string& k, const T& v) {
    key(k);
    return value(v);
  }

  JsonWriter& vector_field(const std::string& k, const Vector& v) {
    key(k).begin_array();
    for (Index i = 0; i < v.size(); ++i) value(v[i]);
    return end_array();
  }

  // Row-major nested arrays.
  JsonWriter& matrix_field(const std::string& k, const Matrix& m) {
    key(k).begin_array();
    for (Index i = 0; i < m.rows(); ++i) {
      begin_array();
      for (Index j = 0; j < m.cols(); ++j) value(m(i, j));
      end_array();
    }
    return end_array();
  }

  const std::string& str() const { return out_; }

 private:
  void separator() {
    if (pending_key_) {
      pending_key_ = false;
      return;
    }
    if (!stack_.empty() && stack_.back()) out_ += ',';
  }
  void mark_value() {
    if (!stack_.empty()) stack_.back() = true;
  }
  void write_string(const std::string& s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\r': out_ += "\\r"; break;
        case '\t': out_ += "\\t"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> stack_;
  bool pending_key_ = false;
};

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write file: " + path);
  out << content;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json parse_json_file(const std::string& path) {
  try {
    return nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw data_error(path + ": invalid JSON: " + e.what());
  }
}

inline Vector json_to_vector(const nlohmann::json& j) {
  Vector v(static_cast<Index>(j.size()));
  Index i = 0;
  for (const auto& x : j) v[i++] = x.get<double>();
  return v;
}

inline Matrix json_to_matrix(const nlohmann::json& j) {
  const auto rows = static_cast<Index>(j.size());
  if (rows == 0) return Matrix(0, 0);
  const auto cols = static_cast<Index>(j.front().size());
  Matrix m(rows, cols);
  Index i = 0;
  for (const auto& row : j) {
    if (static_cast<Index>(row.size()) != cols)
      throw data_error("ragged matrix in JSON");
    Index k = 0;
    for (const auto& x : row) m(i, k++) = x.get<double>();
    ++i;
  }
  return m;
}

}  // namespace dimred
