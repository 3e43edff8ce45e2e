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

// In-process stores standing in for the remote systems of a polystore: a
// relational store of typed tables, a document store of flat JSON documents,
// a triple store with class membership, and a file-metadata store. Each can
// be filled programmatically or loaded from a fixture directory:
//
//   relational  <Table>.csv      header "col:type,..." (type int|float|bool|string)
//   document    <Collection>.jsonl  one flat JSON object per line
//   triple      *.nt             "<s> pred object" per line; rdf:type gives class
//   file        <Dataset>.manifest  "path size key=value ..." per line

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "polyfed/catalog.h"
#include "polyfed/federation.h"
#include "polyfed/schema_registry.h"

namespace polyfed {

using OptionalRow = std::vector<std::optional<Scalar>>;
using Document = std::map<std::string, Scalar, std::less<>>;

class RelationalStore : public StoreAdapter {
 public:
  enum class ColumnType { kString, kInt, kFloat, kBool };
  struct Column {
    std::string name;
    ColumnType type = ColumnType::kString;
  };

  explicit RelationalStore(std::string name, bool pushdown = true) : name_(std::move(name)), pushdown_(pushdown) {}

  void create_table(const std::string& table, std::vector<Column> columns);  // kDuplicateDataset
  // A nullopt cell is SQL NULL. Throws kUnknownDataset, kInvalidArgument.
  void insert(std::string_view table, OptionalRow row);
  std::size_t row_count(std::string_view table) const;

  static std::shared_ptr<RelationalStore> load(std::string name, const std::filesystem::path& dir,
                                               bool pushdown = true);

  const std::string& name() const override { return name_; }
  bool supports_pushdown() const override { return pushdown_; }
  std::vector<std::string> datasets() const override;
  std::vector<std::string> attributes(std::string_view dataset) const override;
  std::vector<Row> read(std::string_view dataset, std::span<const std::string> columns,
                        std::span<const ScanFilter> filters) const override;

 private:
  struct Table {
    std::vector<Column> columns;
    std::vector<OptionalRow> rows;
  };
  const Table& table(std::string_view name) const;

  std::string name_;
  bool pushdown_;
  std::map<std::string, Table, std::less<>> tables_;
};

class DocumentStore : public StoreAdapter {
 public:
  explicit DocumentStore(std::string name, bool pushdown = true) : name_(std::move(name)), pushdown_(pushdown) {}

  // Fields are the union of declared and observed keys.
  void create_collection(const std::string& collection, std::vector<std::string> fields = {});
  void insert(std::string_view collection, Document doc);  // kUnknownDataset
  std::size_t document_count(std::string_view collection) const;

  static std::shared_ptr<DocumentStore> load(std::string name, const std::filesystem::path& dir, bool pushdown = true);

  const std::string& name() const override { return name_; }
  bool supports_pushdown() const override { return pushdown_; }
  std::vector<std::string> datasets() const override;
  std::vector<std::string> attributes(std::string_view dataset) const override;
  std::vector<Row> read(std::string_view dataset, std::span<const std::string> columns,
                        std::span<const ScanFilter> filters) const override;

 private:
  struct Collection {
    std::vector<std::string> fields;
    std::vector<Document> documents;
  };
  const Collection& collection(std::string_view name) const;

  std::string name_;
  bool pushdown_;
  std::map<std::string, Collection, std::less<>> collections_;
};

// Datasets are classes; a class member's attributes are its predicates plus
// the pseudo-attribute "URI" (the subject itself). Multi-valued predicates
// produce one row per value combination.
class TripleStore : public StoreAdapter {
 public:
  static constexpr std::string_view kTypePredicate = "rdf:type";
  static constexpr std::string_view kSubjectAttribute = "URI";

  struct Triple {
    std::string subject;
    std::string predicate;
    Scalar object;

    bool operator==(const Triple&) const = default;
  };

  explicit TripleStore(std::string name, bool pushdown = true) : name_(std::move(name)), pushdown_(pushdown) {}

  void declare_class(const std::string& cls, std::vector<std::string> properties = {});
  void add(std::string subject, std::string predicate, Scalar object);  // duplicates ignored
  const std::vector<Triple>& triples() const { return triples_; }

  static std::shared_ptr<TripleStore> load(std::string name, const std::filesystem::path& dir, bool pushdown = true);

  const std::string& name() const override { return name_; }
  bool supports_pushdown() const override { return pushdown_; }
  std::vector<std::string> datasets() const override;
  std::vector<std::string> attributes(std::string_view dataset) const override;
  std::vector<Row> read(std::string_view dataset, std::span<const std::string> columns,
                        std::span<const ScanFilter> filters) const override;

 private:
  std::vector<std::string> members(std::string_view cls) const;

  std::string name_;
  bool pushdown_;
  std::vector<Triple> triples_;
  std::set<std::tuple<std::string, std::string, Scalar>> seen_;
  std::map<std::string, std::set<std::string>, std::less<>> declared_;
  // subject -> predicate -> values, in insertion order
  std::map<std::string, std::map<std::string, std::vector<Scalar>, std::less<>>, std::less<>> by_subject_;
};

// Datasets are manifests; each record has "path" and "size" plus free-form
// metadata keys.
class FileMetaStore : public StoreAdapter {
 public:
  explicit FileMetaStore(std::string name, bool pushdown = false) : name_(std::move(name)), pushdown_(pushdown) {}

  void create_dataset(const std::string& dataset, std::vector<std::string> keys = {});
  void add_file(std::string_view dataset, std::string path, std::int64_t size, Document metadata = {});

  static std::shared_ptr<FileMetaStore> load(std::string name, const std::filesystem::path& dir, bool pushdown = false);

  const std::string& name() const override { return name_; }
  bool supports_pushdown() const override { return pushdown_; }
  std::vector<std::string> datasets() const override;
  std::vector<std::string> attributes(std::string_view dataset) const override;
  std::vector<Row> read(std::string_view dataset, std::span<const std::string> columns,
                        std::span<const ScanFilter> filters) const override;

 private:
  struct Manifest {
    std::vector<std::string> keys;
    std::vector<Document> records;
  };
  const Manifest& manifest(std::string_view name) const;

  std::string name_;
  bool pushdown_;
  std::map<std::string, Manifest, std::less<>> manifests_;
};

std::shared_ptr<StoreAdapter> load_store(StoreKind kind, const std::string& name, const std::filesystem::path& dir);

// Adapters for every store registered with a data directory.
AdapterMap load_adapters(const CatalogGraph& catalog);

}  // namespace polyfed
