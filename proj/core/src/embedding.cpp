#include "tweetsent/embedding.hpp"

#include <charconv>
#include <cmath>

#include "tweetsent/csv.hpp"
#include "tweetsent/error.hpp"

namespace tweetsent {

void EmbeddingTable::add(std::string token, DenseVector vector) {
  if (vector.size() != dimension_) {
    throw DataError("embedding for '" + token + "' has " + std::to_string(vector.size()) + " components, expected " +
                    std::to_string(dimension_));
  }
  if (vectors_.count(token)) throw DataError("duplicate token '" + token + "' in embedding table");
  tokens_.push_back(token);
  vectors_.emplace(std::move(token), std::move(vector));
}

const DenseVector* EmbeddingTable::find(const std::string& token) const {
  auto it = vectors_.find(token);
  return it == vectors_.end() ? nullptr : &it->second;
}

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) parts.push_back(line.substr(i, j - i));
    i = j;
  }
  return parts;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

EmbeddingTable parse_vectors(std::string_view text, std::string_view origin) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
  }
  const std::string where(origin);
  if (lines.empty()) throw DataError(where + ": missing header line");
  const auto header = split_spaces(lines[0]);
  std::size_t count = 0;
  std::size_t dim = 0;
  if (header.size() != 2 || !parse_number(header[0], count) || !parse_number(header[1], dim) || dim == 0) {
    throw DataError(where + ": malformed header, expected 'count dimension'");
  }

  EmbeddingTable table(dim);
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    const auto parts = split_spaces(lines[ln]);
    if (parts.empty()) continue;
    const std::string line_ref = where + ": line " + std::to_string(ln + 1);
    if (parts.size() != dim + 1) {
      throw DataError(line_ref + ": expected " + std::to_string(dim) + " components, got " +
                      std::to_string(parts.size() - 1));
    }
    DenseVector v(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      if (!parse_number(parts[k + 1], v[k]) || !std::isfinite(v[k])) {
        throw DataError(line_ref + ": invalid number '" + std::string(parts[k + 1]) + "'");
      }
    }
    std::string token(parts[0]);
    if (table.find(token)) throw DataError(line_ref + ": duplicate token '" + token + "'");
    table.add(std::move(token), std::move(v));
  }
  if (table.size() != count) {
    throw DataError(where + ": header declares " + std::to_string(count) + " vectors, found " +
                    std::to_string(table.size()));
  }
  return table;
}

EmbeddingTable load_vectors(const std::filesystem::path& path) {
  return parse_vectors(csv::read_text_file(path), path.string());
}

std::string format_vectors(const EmbeddingTable& table) {
  std::string out = std::to_string(table.size()) + " " + std::to_string(table.dimension()) + "\n";
  char buf[64];
  for (const auto& token : table.tokens()) {
    out += token;
    for (double x : *table.find(token)) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
      out.push_back(' ');
      out.append(buf, ptr);
    }
    out.push_back('\n');
  }
  return out;
}

void save_vectors(const EmbeddingTable& table, const std::filesystem::path& path) {
  csv::write_text_file(path, format_vectors(table));
}

Embedding embed_token(const EmbeddingTable& table, const std::string& token) {
  if (const auto* v = table.find(token)) return {*v, false};
  return {DenseVector(table.dimension(), 0.0), true};
}

Embedding embed_document(std::size_t dimension, const Tokens& tokens,
                         const std::function<Embedding(const std::string&)>& embed_one) {
  Embedding doc{DenseVector(dimension, 0.0), true};
  std::size_t used = 0;
  for (const auto& t : tokens) {
    Embedding e = embed_one(t);
    if (e.missing) continue;
    for (std::size_t k = 0; k < dimension; ++k) doc.vector[k] += e.vector[k];
    ++used;
  }
  if (used == 0) return doc;
  if (used > 1) {
    for (auto& x : doc.vector) x /= static_cast<double>(used);
  }
  doc.missing = false;
  return doc;
}

Embedding embed_document(const EmbeddingTable& table, const Tokens& tokens) {
  return embed_document(table.dimension(), tokens, [&](const std::string& t) { return embed_token(table, t); });
}

}  // namespace tweetsent
