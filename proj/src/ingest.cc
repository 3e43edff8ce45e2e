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

#include "polyfed/ingest.h"

#include <algorithm>
#include <fstream>

namespace polyfed {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void bad(const std::string& detail) { throw Error(ErrorCode::kInvalidArgument, detail); }

const Json& field(const Json& j, const char* key, const char* where) {
  if (!j.is_object()) bad(std::string(where) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(std::string(where) + ": missing \"" + key + "\"");
  return *it;
}

std::string string_field(const Json& j, const char* key, const char* where) {
  const Json& v = field(j, key, where);
  if (!v.is_string()) bad(std::string(where) + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

std::string optional_string(const Json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return {};
  return string_field(j, key, where);
}

bool optional_bool(const Json& j, const char* key, bool fallback, const char* where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) bad(std::string(where) + ": \"" + key + "\" must be a boolean");
  return j.at(key).get<bool>();
}

std::optional<std::int64_t> optional_int(const Json& j, const char* key, const char* where) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number_integer()) bad(std::string(where) + ": \"" + key + "\" must be an integer");
  return j.at(key).get<std::int64_t>();
}

const Json& array_field(const Json& j, const char* key, const char* where) {
  static const Json kEmpty = Json::array();
  if (!j.is_object()) bad(std::string(where) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) return kEmpty;
  if (!it->is_array()) bad(std::string(where) + ": \"" + key + "\" must be an array");
  return *it;
}

AttributeDef attribute_from_json(const Json& j) {
  if (j.is_string()) return AttributeDef{j.get<std::string>(), false, {}, {}};
  AttributeDef a;
  a.name = string_field(j, "name", "attribute");
  a.complex = optional_bool(j, "complex", false, "attribute");
  for (const Json& m : array_field(j, "members", "attribute")) a.members.push_back(attribute_from_json(m));
  for (const Json& n : array_field(j, "alt_names", "attribute")) {
    if (!n.is_string()) bad("attribute: alt_names must hold strings");
    a.alt_names.push_back(n.get<std::string>());
  }
  return a;
}

template <class T, class F>
std::vector<T> list_or_single(const Json& j, const char* key, F&& convert) {
  std::vector<T> out;
  const Json* items = &j;
  if (j.is_object() && j.contains(key)) items = &j.at(key);
  if (items->is_array()) {
    for (const Json& e : *items) out.push_back(convert(e));
  } else {
    out.push_back(convert(*items));
  }
  return out;
}

}  // namespace

Scalar scalar_from_json(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_unsigned()) {
    const auto u = j.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(INT64_MAX)) bad("integer out of range");
    return static_cast<std::int64_t>(u);
  }
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  bad("expected a string, number or boolean value");
}

Json scalar_to_json(const Scalar& value) {
  return std::visit([](const auto& v) { return Json(v); }, value);
}

DatasetSchemaDef dataset_from_json(const Json& j) {
  DatasetSchemaDef d;
  d.name = string_field(j, "name", "dataset");
  d.identifier = optional_string(j, "identifier", "dataset");
  for (const Json& a : array_field(j, "attributes", "dataset")) d.attributes.push_back(attribute_from_json(a));
  for (const Json& r : array_field(j, "referred", "dataset")) {
    d.referred.push_back({string_field(r, "attribute", "referred"), string_field(r, "target", "referred")});
  }
  return d;
}

std::vector<DatasetSchemaDef> gcs_from_json(const Json& j) {
  return list_or_single<DatasetSchemaDef>(j, "entities", dataset_from_json);
}

DataStoreDescriptor lcs_from_json(const Json& j) {
  DataStoreDescriptor d;
  d.name = string_field(j, "name", "store");
  const std::string kind = string_field(j, "kind", "store");
  auto parsed = parse_store_kind(kind);
  if (!parsed) bad("store: unknown kind \"" + kind + "\"");
  d.kind = *parsed;
  d.machine = optional_string(j, "machine", "store");
  if (std::string dir = optional_string(j, "data_dir", "store"); !dir.empty()) d.data_dir = dir;
  for (const Json& db : array_field(j, "databases", "store")) {
    DatabaseDef def{string_field(db, "name", "database"), {}};
    for (const Json& sc : array_field(db, "schemas", "database")) {
      DatabaseSchemaDef schema{string_field(sc, "name", "schema"), {}};
      for (const Json& ds : array_field(sc, "datasets", "schema")) schema.datasets.push_back(dataset_from_json(ds));
      def.schemas.push_back(std::move(schema));
    }
    d.databases.push_back(std::move(def));
  }
  return d;
}

std::vector<AliasMapping> aliases_from_json(const Json& j) {
  return list_or_single<AliasMapping>(j, "aliases", [](const Json& e) {
    return AliasMapping{string_field(e, "gcs", "alias"), string_field(e, "lcs", "alias"),
                        optional_string(e, "store", "alias")};
  });
}

LcsAttributeName lcs_attribute_from_json(const Json& j) {
  if (j.is_string()) {
    QualifiedName q = QualifiedName::parse(j.get<std::string>());
    return {"", q.dataset, q.attribute};
  }
  return {optional_string(j, "store", "attribute reference"), string_field(j, "dataset", "attribute reference"),
          string_field(j, "attribute", "attribute reference")};
}

AttributeValueRecord value_from_json(const Json& j) {
  AttributeValueRecord r;
  r.attribute = lcs_attribute_from_json(j);
  r.value = scalar_from_json(field(j, "value", "attribute value"));
  const std::string dir = optional_string(j, "direction", "attribute value");
  if (!dir.empty()) {
    auto parsed = parse_value_direction(dir);
    if (!parsed) bad("attribute value: direction must be \"used\" or \"generated\"");
    r.direction = *parsed;
  }
  return r;
}

TransformationRun transformation_run_from_json(const Json& j) {
  TransformationRun t;
  t.name = string_field(j, "name", "transformation");
  for (const Json& v : array_field(j, "values", "transformation")) t.values.push_back(value_from_json(v));
  return t;
}

WorkflowDef workflow_from_json(const Json& j) {
  WorkflowDef w;
  w.name = string_field(j, "name", "workflow");
  for (const Json& t : array_field(j, "transformations", "workflow")) {
    TransformationDef def;
    def.name = string_field(t, "name", "transformation");
    for (const Json& a : array_field(t, "used", "transformation")) def.used.push_back(lcs_attribute_from_json(a));
    for (const Json& a : array_field(t, "generated", "transformation")) {
      def.generated.push_back(lcs_attribute_from_json(a));
    }
    w.transformations.push_back(std::move(def));
  }
  return w;
}

ProvenanceDoc provenance_from_json(const Json& j) {
  ProvenanceDoc doc;
  for (const Json& w : array_field(j, "workflows", "provenance")) doc.workflows.push_back(workflow_from_json(w));
  for (const Json& e : array_field(j, "executions", "provenance")) {
    ExecutionDoc x;
    x.workflow = string_field(e, "workflow", "execution");
    x.started_at = optional_int(e, "started_at", "execution");
    x.ended_at = optional_int(e, "ended_at", "execution");
    x.open = optional_bool(e, "open", false, "execution");
    for (const Json& t : array_field(e, "transformations", "execution")) {
      x.transformations.push_back(transformation_run_from_json(t));
    }
    doc.executions.push_back(std::move(x));
  }
  return doc;
}

std::vector<std::string> apply_provenance(CatalogGraph& catalog, const ProvenanceDoc& doc) {
  for (const WorkflowDef& w : doc.workflows) register_workflow(catalog, w);
  std::vector<std::string> ids;
  for (const ExecutionDoc& e : doc.executions) {
    const std::string id = begin_workflow_execution(catalog, e.workflow, e.started_at);
    for (const TransformationRun& t : e.transformations) record_transformation_execution(catalog, id, t.name, t.values);
    if (!e.open) end_workflow_execution(catalog, id, e.ended_at);
    ids.push_back(id);
  }
  return ids;
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseFailure, path.string() + ": " + e.what());
  }
}

void load_fixture(CatalogGraph& catalog, const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::kIoFailure, "not a directory: " + dir.string());
  const fs::path root = fs::absolute(dir).lexically_normal();
  auto where = [](const fs::path& p, const Error& e) {
    return Error(e.code(), p.filename().string() + ": " + e.what());
  };

  if (fs::path p = root / "gcs.json"; fs::exists(p)) {
    try {
      register_gcs(catalog, gcs_from_json(read_json_file(p)));
    } catch (const Error& e) {
      throw where(p, e);
    }
  }
  if (fs::path lcs = root / "lcs"; fs::is_directory(lcs)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(lcs)) {
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& p : files) {
      try {
        DataStoreDescriptor d = lcs_from_json(read_json_file(p));
        if (d.data_dir && fs::path(*d.data_dir).is_relative()) {
          d.data_dir = (root / *d.data_dir).lexically_normal().string();
        }
        register_lcs(catalog, d);
      } catch (const Error& e) {
        throw where(p, e);
      }
    }
  }
  if (fs::path p = root / "aliases.json"; fs::exists(p)) {
    try {
      for (const AliasMapping& m : aliases_from_json(read_json_file(p))) create_alias(catalog, m);
    } catch (const Error& e) {
      throw where(p, e);
    }
  }
  if (fs::path p = root / "provenance.json"; fs::exists(p)) {
    try {
      apply_provenance(catalog, provenance_from_json(read_json_file(p)));
    } catch (const Error& e) {
      throw where(p, e);
    }
  }
}

}  // namespace polyfed
