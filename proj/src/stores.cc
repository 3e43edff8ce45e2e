// Copyright 2026 The polyfed Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "polyfed/stores.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "polyfed/vocabulary.h"

namespace polyfed {

namespace fs = std::filesystem;

namespace {

// Appends the row for one record unless a column is missing or, when
// `apply` is set, a filter fails.
template <class Lookup>
void emit(Lookup&& get, std::span<const std::string> columns, std::span<const ScanFilter> filters, bool apply,
          std::vector<Row>& out) {
  if (apply) {
    for (const auto& f : filters) {
      const Scalar* v = get(f.attribute);
      if (!v || !compare(*v, f.op, f.value)) return;
    }
  }
  Row row;
  row.reserve(columns.size());
  for (const auto& c : columns) {
    const Scalar* v = get(c);
    if (!v) return;
    row.push_back(*v);
  }
  out.push_back(std::move(row));
}

[[noreturn]] void unknown_dataset(const std::string& store, std::string_view dataset) {
  throw Error(ErrorCode::kUnknownDataset, store + " has no dataset '" + std::string(dataset) + "'");
}

[[noreturn]] void parse_failure(const fs::path& file, std::size_t line, const std::string& detail) {
  throw Error(ErrorCode::kParseFailure, file.string() + ":" + std::to_string(line) + ": " + detail);
}

std::vector<fs::path> files_with_extension(const fs::path& dir, std::string_view ext) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::kIoFailure, "not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::ifstream open(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + file.string());
  return in;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

template <class T>
std::optional<T> parse_number(std::string_view text) {
  T v{};
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) return std::nullopt;
  return v;
}

// Integer, then decimal, then the text itself.
Scalar guess_scalar(std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  if (auto i = parse_number<std::int64_t>(text)) return *i;
  if (text.find_first_of(".eE") != std::string_view::npos) {
    if (auto d = parse_number<double>(text)) return *d;
  }
  return std::string(text);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back() += c;
    }
  }
  if (quoted) throw Error(ErrorCode::kInvalidArgument, "unterminated quoted field");
  return out;
}

std::optional<RelationalStore::ColumnType> parse_column_type(std::string_view t) {
  using T = RelationalStore::ColumnType;
  if (t == "string" || t == "text") return T::kString;
  if (t == "int" || t == "integer") return T::kInt;
  if (t == "float" || t == "double") return T::kFloat;
  if (t == "bool" || t == "boolean") return T::kBool;
  return std::nullopt;
}

bool fits(const Scalar& v, RelationalStore::ColumnType type) {
  using T = RelationalStore::ColumnType;
  switch (type) {
    case T::kString: return std::holds_alternative<std::string>(v);
    case T::kInt: return std::holds_alternative<std::int64_t>(v);
    case T::kFloat: return std::holds_alternative<double>(v);
    case T::kBool: return std::holds_alternative<bool>(v);
  }
  return false;
}

std::optional<Scalar> parse_cell(const std::string& text, RelationalStore::ColumnType type) {
  using T = RelationalStore::ColumnType;
  if (type == T::kString) return Scalar(text);
  if (text.empty()) return std::nullopt;  // NULL
  switch (type) {
    case T::kInt:
      if (auto v = parse_number<std::int64_t>(text)) return Scalar(*v);
      break;
    case T::kFloat:
      if (auto v = parse_number<double>(text)) return Scalar(*v);
      break;
    case T::kBool:
      if (text == "true") return Scalar(true);
      if (text == "false") return Scalar(false);
      break;
    default:
      break;
  }
  throw Error(ErrorCode::kInvalidArgument, "bad cell '" + text + "'");
}

std::optional<Scalar> from_json(const nlohmann::json& j) {
  if (j.is_string()) return Scalar(j.get<std::string>());
  if (j.is_boolean()) return Scalar(j.get<bool>());
  if (j.is_number_unsigned()) {
    const auto u = j.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(INT64_MAX)) throw Error(ErrorCode::kInvalidArgument, "integer out of range");
    return Scalar(static_cast<std::int64_t>(u));
  }
  if (j.is_number_integer()) return Scalar(j.get<std::int64_t>());
  if (j.is_number_float()) return Scalar(j.get<double>());
  if (j.is_null()) return std::nullopt;
  throw Error(ErrorCode::kInvalidArgument, "nested values are not supported");
}

void add_field(std::vector<std::string>& fields, const std::string& f) {
  if (std::find(fields.begin(), fields.end(), f) == fields.end()) fields.push_back(f);
}

}  // namespace

// ---------------------------------------------------------------------------
// RelationalStore

void RelationalStore::create_table(const std::string& table, std::vector<Column> columns) {
  if (tables_.count(table)) throw Error(ErrorCode::kDuplicateDataset, name_ + "/" + table);
  for (std::size_t i = 0; i < columns.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (columns[i].name == columns[j].name) {
        throw Error(ErrorCode::kInvalidArgument, table + ": duplicate column " + columns[i].name);
      }
    }
  }
  tables_.emplace(table, Table{std::move(columns), {}});
}

const RelationalStore::Table& RelationalStore::table(std::string_view name) const {
  auto it = tables_.find(name);
  if (it == tables_.end()) unknown_dataset(name_, name);
  return it->second;
}

void RelationalStore::insert(std::string_view name, OptionalRow row) {
  auto it = tables_.find(name);
  if (it == tables_.end()) unknown_dataset(name_, name);
  Table& t = it->second;
  if (row.size() != t.columns.size()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(name) + ": expected " + std::to_string(t.columns.size()) +
                                                 " values, got " + std::to_string(row.size()));
  }
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] && !fits(*row[i], t.columns[i].type)) {
      throw Error(ErrorCode::kInvalidArgument, std::string(name) + "." + t.columns[i].name + ": wrong value type " +
                                                   std::string(type_name(*row[i])));
    }
  }
  t.rows.push_back(std::move(row));
}

std::size_t RelationalStore::row_count(std::string_view name) const { return table(name).rows.size(); }

std::vector<std::string> RelationalStore::datasets() const {
  std::vector<std::string> out;
  for (const auto& [n, t] : tables_) out.push_back(n);
  return out;
}

std::vector<std::string> RelationalStore::attributes(std::string_view dataset) const {
  std::vector<std::string> out;
  for (const auto& c : table(dataset).columns) out.push_back(c.name);
  return out;
}

std::vector<Row> RelationalStore::read(std::string_view dataset, std::span<const std::string> columns,
                                       std::span<const ScanFilter> filters) const {
  const Table& t = table(dataset);
  std::map<std::string, std::size_t, std::less<>> pos;
  for (std::size_t i = 0; i < t.columns.size(); ++i) pos.emplace(t.columns[i].name, i);
  std::vector<Row> out;
  for (const OptionalRow& r : t.rows) {
    auto get = [&](std::string_view c) -> const Scalar* {
      auto it = pos.find(c);
      if (it == pos.end() || !r[it->second]) return nullptr;
      return &*r[it->second];
    };
    emit(get, columns, filters, pushdown_, out);
  }
  return out;
}

std::shared_ptr<RelationalStore> RelationalStore::load(std::string name, const fs::path& dir, bool pushdown) {
  auto store = std::make_shared<RelationalStore>(std::move(name), pushdown);
  for (const fs::path& file : files_with_extension(dir, ".csv")) {
    std::ifstream in = open(file);
    std::string line;
    std::size_t n = 0;
    std::string table = file.stem().string();
    std::vector<Column> columns;
    while (std::getline(in, line)) {
      ++n;
      if (trim(line).empty()) continue;
      try {
        std::vector<std::string> cells = split_csv(line);
        if (columns.empty()) {
          for (const std::string& h : cells) {
            const auto colon = h.rfind(':');
            Column c{trim(h.substr(0, colon)), ColumnType::kString};
            if (colon != std::string::npos) {
              auto type = parse_column_type(trim(h.substr(colon + 1)));
              if (!type) throw Error(ErrorCode::kInvalidArgument, "unknown column type in '" + h + "'");
              c.type = *type;
            }
            columns.push_back(std::move(c));
          }
          store->create_table(table, columns);
          continue;
        }
        if (cells.size() != columns.size()) throw Error(ErrorCode::kInvalidArgument, "wrong number of cells");
        OptionalRow row;
        for (std::size_t i = 0; i < cells.size(); ++i) row.push_back(parse_cell(cells[i], columns[i].type));
        store->insert(table, std::move(row));
      } catch (const Error& e) {
        parse_failure(file, n, e.what());
      }
    }
    if (columns.empty()) parse_failure(file, n, "missing header");
  }
  return store;
}

// ---------------------------------------------------------------------------
// DocumentStore

void DocumentStore::create_collection(const std::string& name, std::vector<std::string> fields) {
  if (collections_.count(name)) throw Error(ErrorCode::kDuplicateDataset, name_ + "/" + name);
  Collection c;
  for (auto& f : fields) add_field(c.fields, f);
  collections_.emplace(name, std::move(c));
}

const DocumentStore::Collection& DocumentStore::collection(std::string_view name) const {
  auto it = collections_.find(name);
  if (it == collections_.end()) unknown_dataset(name_, name);
  return it->second;
}

void DocumentStore::insert(std::string_view name, Document doc) {
  auto it = collections_.find(name);
  if (it == collections_.end()) unknown_dataset(name_, name);
  for (const auto& [k, v] : doc) add_field(it->second.fields, k);
  it->second.documents.push_back(std::move(doc));
}

std::size_t DocumentStore::document_count(std::string_view name) const { return collection(name).documents.size(); }

std::vector<std::string> DocumentStore::datasets() const {
  std::vector<std::string> out;
  for (const auto& [n, c] : collections_) out.push_back(n);
  return out;
}

std::vector<std::string> DocumentStore::attributes(std::string_view dataset) const { return collection(dataset).fields; }

std::vector<Row> DocumentStore::read(std::string_view dataset, std::span<const std::string> columns,
                                     std::span<const ScanFilter> filters) const {
  std::vector<Row> out;
  for (const Document& d : collection(dataset).documents) {
    auto get = [&](std::string_view c) -> const Scalar* {
      auto it = d.find(c);
      return it == d.end() ? nullptr : &it->second;
    };
    emit(get, columns, filters, pushdown_, out);
  }
  return out;
}

std::shared_ptr<DocumentStore> DocumentStore::load(std::string name, const fs::path& dir, bool pushdown) {
  auto store = std::make_shared<DocumentStore>(std::move(name), pushdown);
  for (const fs::path& file : files_with_extension(dir, ".jsonl")) {
    const std::string coll = file.stem().string();
    store->create_collection(coll);
    std::ifstream in = open(file);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (trim(line).empty()) continue;
      try {
        const nlohmann::json j = nlohmann::json::parse(line);
        if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "expected a JSON object");
        Document doc;
        for (const auto& [k, v] : j.items()) {
          if (auto s = from_json(v)) doc.emplace(k, std::move(*s));
        }
        store->insert(coll, std::move(doc));
      } catch (const nlohmann::json::exception& e) {
        parse_failure(file, n, e.what());
      } catch (const Error& e) {
        parse_failure(file, n, e.what());
      }
    }
  }
  return store;
}

// ---------------------------------------------------------------------------
// TripleStore

void TripleStore::declare_class(const std::string& cls, std::vector<std::string> properties) {
  auto& set = declared_[cls];
  set.insert(properties.begin(), properties.end());
}

void TripleStore::add(std::string subject, std::string predicate, Scalar object) {
  if (subject.empty() || predicate.empty()) throw Error(ErrorCode::kInvalidArgument, "empty subject or predicate");
  if (!seen_.emplace(subject, predicate, object).second) return;
  by_subject_[subject][predicate].push_back(object);
  if (predicate == kTypePredicate) {
    if (const auto* cls = std::get_if<std::string>(&object)) declared_[*cls];
  }
  triples_.push_back({std::move(subject), std::move(predicate), std::move(object)});
}

std::vector<std::string> TripleStore::members(std::string_view cls) const {
  if (!declared_.count(cls)) unknown_dataset(name_, cls);
  std::vector<std::string> out;
  for (const Triple& t : triples_) {
    if (t.predicate == kTypePredicate && std::holds_alternative<std::string>(t.object) &&
        std::get<std::string>(t.object) == cls) {
      out.push_back(t.subject);
    }
  }
  return out;
}

std::vector<std::string> TripleStore::datasets() const {
  std::vector<std::string> out;
  for (const auto& [c, props] : declared_) out.push_back(c);
  return out;
}

std::vector<std::string> TripleStore::attributes(std::string_view dataset) const {
  std::vector<std::string> out{std::string(kSubjectAttribute)};
  auto it = declared_.find(dataset);
  if (it == declared_.end()) unknown_dataset(name_, dataset);
  for (const auto& p : it->second) add_field(out, p);
  for (const std::string& s : members(dataset)) {
    for (const auto& [p, values] : by_subject_.at(s)) {
      if (p != kTypePredicate) add_field(out, p);
    }
  }
  return out;
}

std::vector<Row> TripleStore::read(std::string_view dataset, std::span<const std::string> columns,
                                   std::span<const ScanFilter> filters) const {
  // Attributes whose values are needed, each with its candidate values.
  std::vector<std::string> needed;
  for (const auto& c : columns) add_field(needed, c);
  for (const auto& f : filters) add_field(needed, f.attribute);

  std::vector<Row> out;
  static const std::vector<Scalar> kNone;
  for (const std::string& s : members(dataset)) {
    const auto& preds = by_subject_.at(s);
    const Scalar subject_value(s);
    std::vector<const std::vector<Scalar>*> values;
    std::vector<Scalar> subject_list{subject_value};
    bool empty = false;
    for (const auto& a : needed) {
      if (a == kSubjectAttribute) {
        values.push_back(&subject_list);
        continue;
      }
      auto it = preds.find(a);
      values.push_back(it == preds.end() ? &kNone : &it->second);
      if (values.back()->empty()) empty = true;
    }
    if (empty) continue;
    std::vector<std::size_t> cursor(needed.size(), 0);
    for (;;) {
      auto get = [&](std::string_view c) -> const Scalar* {
        const auto i = static_cast<std::size_t>(std::find(needed.begin(), needed.end(), c) - needed.begin());
        return i < needed.size() ? &(*values[i])[cursor[i]] : nullptr;
      };
      emit(get, columns, filters, pushdown_, out);
      bool done = true;
      for (std::size_t i = needed.size(); i-- > 0;) {
        if (++cursor[i] < values[i]->size()) {
          done = false;
          break;
        }
        cursor[i] = 0;
      }
      if (done) break;
    }
  }
  return out;
}

namespace {

// "<iri>" or a bare token; returns the token and advances `rest`.
std::string take_term(std::string_view& rest) {
  rest = rest.substr(std::min(rest.size(), rest.find_first_not_of(" \t")));
  std::string out;
  if (!rest.empty() && rest.front() == '<') {
    const auto close = rest.find('>');
    if (close == std::string_view::npos) throw Error(ErrorCode::kInvalidArgument, "unterminated IRI");
    out = std::string(rest.substr(1, close - 1));
    rest.remove_prefix(close + 1);
  } else {
    const auto end = std::min(rest.size(), rest.find_first_of(" \t"));
    out = std::string(rest.substr(0, end));
    rest.remove_prefix(end);
  }
  return out;
}

Scalar parse_object(std::string text) {
  if (text.size() >= 2 && text.back() == '.' && (text[text.size() - 2] == ' ' || text[text.size() - 2] == '\t')) {
    text = trim(text.substr(0, text.size() - 1));
  }
  if (text.empty()) throw Error(ErrorCode::kInvalidArgument, "missing object");
  if (text.front() == '<') {
    if (text.back() != '>') throw Error(ErrorCode::kInvalidArgument, "unterminated IRI");
    return text.substr(1, text.size() - 2);
  }
  if (text.front() == '"') return nlohmann::json::parse(text).get<std::string>();
  return guess_scalar(text);
}

}  // namespace

std::shared_ptr<TripleStore> TripleStore::load(std::string name, const fs::path& dir, bool pushdown) {
  auto store = std::make_shared<TripleStore>(std::move(name), pushdown);
  for (const fs::path& file : files_with_extension(dir, ".nt")) {
    std::ifstream in = open(file);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      const std::string t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      try {
        std::string_view rest = t;
        std::string s = take_term(rest);
        std::string p = take_term(rest);
        if (p == "a") p = std::string(kTypePredicate);
        if (s.empty() || p.empty()) throw Error(ErrorCode::kInvalidArgument, "expected subject and predicate");
        store->add(std::move(s), std::move(p), parse_object(trim(rest)));
      } catch (const nlohmann::json::exception& e) {
        parse_failure(file, n, e.what());
      } catch (const Error& e) {
        parse_failure(file, n, e.what());
      }
    }
  }
  return store;
}

// ---------------------------------------------------------------------------
// FileMetaStore

void FileMetaStore::create_dataset(const std::string& dataset, std::vector<std::string> keys) {
  if (manifests_.count(dataset)) throw Error(ErrorCode::kDuplicateDataset, name_ + "/" + dataset);
  Manifest m;
  m.keys = {"path", "size"};
  for (auto& k : keys) add_field(m.keys, k);
  manifests_.emplace(dataset, std::move(m));
}

const FileMetaStore::Manifest& FileMetaStore::manifest(std::string_view name) const {
  auto it = manifests_.find(name);
  if (it == manifests_.end()) unknown_dataset(name_, name);
  return it->second;
}

void FileMetaStore::add_file(std::string_view dataset, std::string path, std::int64_t size, Document metadata) {
  auto it = manifests_.find(dataset);
  if (it == manifests_.end()) unknown_dataset(name_, dataset);
  if (metadata.count("path") || metadata.count("size")) {
    throw Error(ErrorCode::kInvalidArgument, "metadata may not redefine path or size");
  }
  for (const auto& [k, v] : metadata) add_field(it->second.keys, k);
  metadata.emplace("path", std::move(path));
  metadata.emplace("size", size);
  it->second.records.push_back(std::move(metadata));
}

std::vector<std::string> FileMetaStore::datasets() const {
  std::vector<std::string> out;
  for (const auto& [n, m] : manifests_) out.push_back(n);
  return out;
}

std::vector<std::string> FileMetaStore::attributes(std::string_view dataset) const { return manifest(dataset).keys; }

std::vector<Row> FileMetaStore::read(std::string_view dataset, std::span<const std::string> columns,
                                     std::span<const ScanFilter> filters) const {
  std::vector<Row> out;
  for (const Document& d : manifest(dataset).records) {
    auto get = [&](std::string_view c) -> const Scalar* {
      auto it = d.find(c);
      return it == d.end() ? nullptr : &it->second;
    };
    emit(get, columns, filters, pushdown_, out);
  }
  return out;
}

std::shared_ptr<FileMetaStore> FileMetaStore::load(std::string name, const fs::path& dir, bool pushdown) {
  auto store = std::make_shared<FileMetaStore>(std::move(name), pushdown);
  for (const fs::path& file : files_with_extension(dir, ".manifest")) {
    const std::string dataset = file.stem().string();
    store->create_dataset(dataset);
    std::ifstream in = open(file);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      const std::string t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      try {
        std::istringstream words(t);
        std::string path, size_text, kv;
        words >> path >> size_text;
        auto size = parse_number<std::int64_t>(size_text);
        if (path.empty() || !size) throw Error(ErrorCode::kInvalidArgument, "expected '<path> <size>'");
        Document meta;
        while (words >> kv) {
          const auto eq = kv.find('=');
          if (eq == std::string::npos || eq == 0) throw Error(ErrorCode::kInvalidArgument, "expected key=value");
          meta.emplace(kv.substr(0, eq), guess_scalar(kv.substr(eq + 1)));
        }
        store->add_file(dataset, path, *size, std::move(meta));
      } catch (const Error& e) {
        parse_failure(file, n, e.what());
      }
    }
  }
  return store;
}

// ---------------------------------------------------------------------------

std::shared_ptr<StoreAdapter> load_store(StoreKind kind, const std::string& name, const fs::path& dir) {
  switch (kind) {
    case StoreKind::kRelationalDB: return RelationalStore::load(name, dir);
    case StoreKind::kDocumentDB: return DocumentStore::load(name, dir);
    case StoreKind::kTripleStore: return TripleStore::load(name, dir);
    case StoreKind::kFileSystem: return FileMetaStore::load(name, dir);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown store kind");
}

AdapterMap load_adapters(const CatalogGraph& catalog) {
  AdapterMap out;
  for (const std::string& s : store_names(catalog)) {
    const std::string dir = string_property(catalog.node(vocab::store(s)), vocab::kPropDataDir);
    if (dir.empty()) continue;
    out.emplace(s, load_store(store_kind(catalog, s), s, dir));
  }
  return out;
}

}  // namespace polyfed
