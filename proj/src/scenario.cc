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

#include "polyfed/scenario.h"

#include "polyfed/provenance.h"
#include "polyfed/stores.h"

namespace polyfed::scenario {

namespace {

DatasetSchemaDef dataset(std::string name, std::string identifier, std::vector<std::string> attributes) {
  DatasetSchemaDef d;
  d.name = std::move(name);
  d.identifier = std::move(identifier);
  for (auto& a : attributes) d.attributes.push_back(AttributeDef{std::move(a), false, {}, {}});
  return d;
}

DataStoreDescriptor store(std::string_view name, StoreKind kind, std::string machine, std::string db,
                          std::string schema, DatasetSchemaDef ds,
                          const std::optional<std::filesystem::path>& root) {
  DataStoreDescriptor d;
  d.name = std::string(name);
  d.kind = kind;
  d.machine = std::move(machine);
  d.databases.push_back({std::move(db), {{std::move(schema), {std::move(ds)}}}});
  if (root) d.data_dir = (*root / d.name).lexically_normal().string();
  return d;
}

LcsAttributeName attr(std::string_view store, std::string dataset, std::string attribute) {
  return {std::string(store), std::move(dataset), std::move(attribute)};
}

AttributeValueRecord value(LcsAttributeName a, Scalar v, ValueDirection d) { return {std::move(a), std::move(v), d}; }

}  // namespace

std::vector<DatasetSchemaDef> gcs() {
  DatasetSchemaDef seismic = dataset("Seismic", "URI", {"URI", "name", "inline", "crossline", "well", "horizon", "epsg"});
  seismic.attributes[4].alt_names = {"hasWell"};
  seismic.attributes[5].alt_names = {"hasHorizon"};
  seismic.referred = {{"well", "Well.wellURI"}, {"horizon", "Horizon.horizonURI"}};
  return {seismic, dataset("Well", "wellURI", {"wellURI", "name"}),
          dataset("Horizon", "horizonURI", {"horizonURI", "name"})};
}

std::vector<DataStoreDescriptor> stores(const std::optional<std::filesystem::path>& root) {
  return {
      store(kRelational, StoreKind::kRelationalDB, "pg-server", "SeismicDB", "SeismicSQ",
            dataset("SeismicHeader", "id", {"id", "inline", "crossline", "header_info", "filepath", "name"}), root),
      store(kTriple, StoreKind::kTripleStore, "kb-server", "Seismic catalog", "Seismic repo",
            dataset("SeismicCls", "URI", {"URI", "name", "hasWell", "hasHorizon"}), root),
      store(kDocument, StoreKind::kDocumentDB, "mongo-server", "Seismicdb", "Seismic",
            dataset("Seismic_data", "identifier", {"identifier", "name", "num_ilines", "num_xlines", "epsg"}), root),
      store(kFiles, StoreKind::kFileSystem, "localhost", "data", "training",
            dataset("Training File", "path", {"path", "size"}), root),
  };
}

std::vector<AliasMapping> aliases() {
  const std::string pg(kRelational), kb(kTriple), mongo(kDocument);
  return {
      {"Seismic.URI", "SeismicHeader.id", pg},
      {"Seismic.URI", "SeismicCls.URI", kb},
      {"Seismic.URI", "Seismic_data.identifier", mongo},
      {"Seismic.inline", "SeismicHeader.inline", pg},
      {"Seismic.crossline", "SeismicHeader.crossline", pg},
      {"Seismic.well", "SeismicCls.hasWell", kb},
      {"Seismic.horizon", "SeismicCls.hasHorizon", kb},
      {"Seismic.epsg", "Seismic_data.epsg", mongo},
      {"Seismic.name", "SeismicHeader.name", pg},
      {"Seismic.name", "SeismicCls.name", kb},
  };
}

WorkflowDef workflow() {
  const auto header = attr(kRelational, "SeismicHeader", "id");
  const auto doc = attr(kDocument, "Seismic_data", "identifier");
  const auto kb = attr(kTriple, "SeismicCls", "URI");
  return {std::string(kWorkflow),
          {
              {"Data quality assessment", {}, {header}},
              {"Geospatial index generation", {}, {doc}},
              {"Expert Knowledge Ingestion", {}, {kb}},
              {"Data preparation", {header, doc, kb}, {attr(kFiles, "Training File", "path")}},
          }};
}

ExecutionDoc netherlands_execution() {
  const auto header = attr(kRelational, "SeismicHeader", "id");
  const auto doc = attr(kDocument, "Seismic_data", "identifier");
  const auto kb = attr(kTriple, "SeismicCls", "URI");
  const Scalar uri = std::string(kSeismicUri);
  ExecutionDoc e;
  e.workflow = std::string(kWorkflow);
  e.started_at = 1600000000000;
  e.ended_at = 1600000360000;
  e.transformations = {
      {"Data quality assessment", {value(header, kHeaderId, ValueDirection::kGenerated)}},
      {"Geospatial index generation", {value(doc, kDocumentId, ValueDirection::kGenerated)}},
      {"Expert Knowledge Ingestion", {value(kb, uri, ValueDirection::kGenerated)}},
      {"Data preparation",
       {value(header, kHeaderId, ValueDirection::kUsed), value(doc, kDocumentId, ValueDirection::kUsed),
        value(kb, uri, ValueDirection::kUsed),
        value(attr(kFiles, "Training File", "path"), std::string(kTrainingPath), ValueDirection::kGenerated)}},
  };
  return e;
}

void register_schemas(CatalogGraph& catalog, const std::optional<std::filesystem::path>& data_root) {
  register_gcs(catalog, gcs());
  for (const auto& d : stores(data_root)) register_lcs(catalog, d);
  for (const auto& m : aliases()) create_alias(catalog, m);
  register_workflow(catalog, workflow());
}

CatalogGraph build(const std::optional<std::filesystem::path>& data_root) {
  CatalogGraph catalog;
  register_schemas(catalog, data_root);
  apply_provenance(catalog, ProvenanceDoc{{}, {netherlands_execution()}});
  return catalog;
}

AdapterMap adapters() {
  using C = RelationalStore::ColumnType;
  auto pg = std::make_shared<RelationalStore>(std::string(kRelational));
  pg->create_table("SeismicHeader", {{"id", C::kInt},
                                     {"inline", C::kInt},
                                     {"crossline", C::kInt},
                                     {"header_info", C::kString},
                                     {"filepath", C::kString},
                                     {"name", C::kString}});
  pg->insert("SeismicHeader", {std::int64_t{12345}, std::int64_t{651}, std::int64_t{951},
                               std::string("C01 CLIENT: TNO  AREA: F3 BLOCK, DUTCH NORTH SEA"),
                               std::string("/data/netherlands.sgy"), std::string("Netherlands")});
  pg->insert("SeismicHeader", {std::int64_t{23456}, std::int64_t{3437}, std::int64_t{5237},
                               std::string("C01 CLIENT: GA  AREA: BROWSE BASIN"), std::string("/data/poseidon.sgy"),
                               std::string("Poseidon")});

  auto kb = std::make_shared<TripleStore>(std::string(kTriple));
  const std::string type(TripleStore::kTypePredicate);
  const std::string nl(kSeismicUri), pos = "http://oilandgas/Seismic#Poseidon", well = "http://oilandgas/Well#F03-4";
  kb->add(nl, type, std::string("SeismicCls"));
  kb->add(nl, "name", std::string("Netherlands"));
  kb->add(nl, "hasWell", well);
  kb->add(nl, "hasHorizon", std::string("http://oilandgas/Horizon#North_Sea_Truncation"));
  kb->add(pos, type, std::string("SeismicCls"));
  kb->add(pos, "name", std::string("Poseidon"));
  kb->add(pos, "hasWell", std::string("http://oilandgas/Well#Boreas-1"));
  kb->add(pos, "hasHorizon", std::string("http://oilandgas/Horizon#Top_Plover"));
  kb->add(well, type, std::string("Well"));
  kb->add(well, "name", std::string("F03-4"));

  auto mongo = std::make_shared<DocumentStore>(std::string(kDocument));
  mongo->create_collection("Seismic_data");
  auto doc = [](std::int64_t id, const char* name, std::int64_t il, std::int64_t xl, std::int64_t epsg) {
    return Document{{"identifier", id}, {"name", std::string(name)}, {"num_ilines", il}, {"num_xlines", xl},
                    {"epsg", epsg}};
  };
  mongo->insert("Seismic_data", doc(1111, "Netherlands", 651, 951, 23031));
  mongo->insert("Seismic_data", doc(2222, "Poseidon", 3437, 5237, 28352));
  mongo->insert("Seismic_data", doc(3333, "Netherlands", 101, 202, 4326));

  auto files = std::make_shared<FileMetaStore>(std::string(kFiles));
  files->create_dataset("Training File");
  files->add_file("Training File", std::string(kTrainingPath), 16384,
                  {{"source", std::string("netherlands.sgy")}, {"format", std::string("train")}});
  files->add_file("Training File", "/data/poseidon.train", 32768,
                  {{"source", std::string("poseidon.sgy")}, {"format", std::string("train")}});

  return {{pg->name(), pg}, {kb->name(), kb}, {mongo->name(), mongo}, {files->name(), files}};
}

}  // namespace polyfed::scenario
