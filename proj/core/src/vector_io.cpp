// Copyright 2026 The burnseg Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "burnseg/vector_io.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <memory>
#include <regex>

#include "burnseg/error.hpp"
#include "json.hpp"

namespace burnseg {

namespace {

using nlohmann::json;

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

// ---------------------------------------------------------------- GeoJSON

Ring ring_from_json(const json& coords) {
  Ring ring;
  ring.reserve(coords.size());
  for (const json& xy : coords) {
    require(xy.is_array() && xy.size() >= 2, ErrorCode::kUnsupportedFormat, "bad GeoJSON position");
    ring.push_back({xy[0].get<double>(), xy[1].get<double>()});
  }
  if (ring.size() > 1 && ring.front().x == ring.back().x && ring.front().y == ring.back().y) {
    ring.pop_back();
  }
  return ring;
}

Polygon polygon_from_json(const json& rings) {
  Polygon polygon;
  for (std::size_t i = 0; i < rings.size(); ++i) {
    if (i == 0) {
      polygon.outer = ring_from_json(rings[i]);
    } else {
      polygon.holes.push_back(ring_from_json(rings[i]));
    }
  }
  return polygon;
}

void collect_geometry(const json& geometry, PolygonSet& set) {
  if (geometry.is_null()) {
    return;
  }
  const std::string type = geometry.value("type", "");
  if (type == "Polygon") {
    set.polygons.push_back(polygon_from_json(geometry.at("coordinates")));
  } else if (type == "MultiPolygon") {
    for (const json& rings : geometry.at("coordinates")) {
      set.polygons.push_back(polygon_from_json(rings));
    }
  } else if (type == "GeometryCollection") {
    for (const json& g : geometry.at("geometries")) {
      collect_geometry(g, set);
    }
  }
}

json ring_to_json(const Ring& ring) {
  json coords = json::array();
  for (const Point& p : ring) {
    coords.push_back({p.x, p.y});
  }
  if (!ring.empty()) {
    coords.push_back({ring.front().x, ring.front().y});
  }
  return coords;
}

PolygonSet read_geojson(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::kUnsupportedFormat, "'" + path.string() + "': " + e.what());
  }
  PolygonSet set;
  set.crs_id = kGeoJsonDefaultCrs;
  if (doc.contains("crs") && doc["crs"].contains("properties")) {
    set.crs_id = normalize_crs_name(doc["crs"]["properties"].value("name", kGeoJsonDefaultCrs));
  }
  const std::string type = doc.value("type", "");
  try {
    if (type == "FeatureCollection") {
      for (const json& feature : doc.at("features")) {
        collect_geometry(feature.at("geometry"), set);
      }
    } else if (type == "Feature") {
      collect_geometry(doc.at("geometry"), set);
    } else {
      collect_geometry(doc, set);
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kUnsupportedFormat, "'" + path.string() + "': " + e.what());
  }
  return set;
}

void write_geojson(const PolygonSet& set, const std::filesystem::path& path) {
  json features = json::array();
  for (const Polygon& polygon : set.polygons) {
    json rings = json::array();
    rings.push_back(ring_to_json(polygon.outer));
    for (const Ring& hole : polygon.holes) {
      rings.push_back(ring_to_json(hole));
    }
    features.push_back({{"type", "Feature"},
                        {"properties", json::object()},
                        {"geometry", {{"type", "Polygon"}, {"coordinates", rings}}}});
  }
  json doc = {{"type", "FeatureCollection"},
              {"crs", {{"type", "name"}, {"properties", {{"name", set.crs_id}}}}},
              {"features", features}};
  std::ofstream out(path);
  require(out.good(), ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  out << doc.dump(1) << "\n";
}

// ------------------------------------------------------------- GeoPackage

struct SqliteCloser {
  void operator()(sqlite3* db) const { sqlite3_close(db); }
};
struct StmtCloser {
  void operator()(sqlite3_stmt* stmt) const { sqlite3_finalize(stmt); }
};
using Db = std::unique_ptr<sqlite3, SqliteCloser>;
using Stmt = std::unique_ptr<sqlite3_stmt, StmtCloser>;

Stmt prepare(sqlite3* db, const std::string& sql) {
  sqlite3_stmt* stmt = nullptr;
  require(sqlite3_prepare_v2(db, sql.c_str(), -1, &stmt, nullptr) == SQLITE_OK, ErrorCode::kUnsupportedFormat,
          std::string("GeoPackage query failed: ") + sqlite3_errmsg(db));
  return Stmt(stmt);
}

void exec(sqlite3* db, const std::string& sql) {
  char* message = nullptr;
  if (sqlite3_exec(db, sql.c_str(), nullptr, nullptr, &message) != SQLITE_OK) {
    const std::string text = message ? message : "unknown";
    sqlite3_free(message);
    fail(ErrorCode::kIoError, "GeoPackage write failed: " + text);
  }
}

std::string column_text(sqlite3_stmt* stmt, int col) {
  const unsigned char* text = sqlite3_column_text(stmt, col);
  return text ? reinterpret_cast<const char*>(text) : "";
}

class WkbReader {
 public:
  WkbReader(const unsigned char* data, std::size_t size) : data_(data), size_(size) {}

  void read_geometry(std::vector<Polygon>& out) {
    little_ = byte() == 1;
    const std::uint32_t raw_type = u32();
    const std::uint32_t base = raw_type % 1000;
    const std::uint32_t dims_code = raw_type / 1000;
    const int dims = dims_code == 0 ? 2 : (dims_code == 3 ? 4 : 3);
    if (base == 3) {
      out.push_back(read_polygon(dims));
    } else if (base == 6 || base == 7) {
      const std::uint32_t n = u32();
      for (std::uint32_t i = 0; i < n; ++i) {
        const bool saved = little_;
        read_geometry(out);
        little_ = saved;
      }
    } else {
      fail(ErrorCode::kUnsupportedFormat, "WKB geometry type " + std::to_string(raw_type) + " is not polygonal");
    }
  }

 private:
  Polygon read_polygon(int dims) {
    Polygon polygon;
    const std::uint32_t rings = u32();
    for (std::uint32_t r = 0; r < rings; ++r) {
      const std::uint32_t n = u32();
      Ring ring;
      ring.reserve(n);
      for (std::uint32_t i = 0; i < n; ++i) {
        const double x = f64();
        const double y = f64();
        for (int d = 2; d < dims; ++d) {
          f64();
        }
        ring.push_back({x, y});
      }
      if (ring.size() > 1 && ring.front().x == ring.back().x && ring.front().y == ring.back().y) {
        ring.pop_back();
      }
      if (r == 0) {
        polygon.outer = std::move(ring);
      } else {
        polygon.holes.push_back(std::move(ring));
      }
    }
    return polygon;
  }

  void need(std::size_t n) const {
    require(pos_ + n <= size_, ErrorCode::kUnsupportedFormat, "truncated WKB");
  }
  std::uint8_t byte() {
    need(1);
    return data_[pos_++];
  }
  template <typename T>
  T scalar() {
    need(sizeof(T));
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, data_ + pos_, sizeof(T));
    pos_ += sizeof(T);
    if (!little_) {
      std::reverse(buf, buf + sizeof(T));
    }
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return value;
  }
  std::uint32_t u32() { return scalar<std::uint32_t>(); }
  double f64() { return scalar<double>(); }

  const unsigned char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
  bool little_ = true;
};

void parse_gpkg_blob(const unsigned char* data, std::size_t size, std::vector<Polygon>& out) {
  require(size >= 8 && data[0] == 'G' && data[1] == 'P', ErrorCode::kUnsupportedFormat,
          "geometry blob lacks the GP header");
  const std::uint8_t flags = data[3];
  const bool empty = (flags >> 4) & 1U;
  if (empty) {
    return;
  }
  static constexpr std::size_t kEnvelopeBytes[] = {0, 32, 48, 48, 64, 0, 0, 0};
  const std::size_t offset = 8 + kEnvelopeBytes[(flags >> 1) & 7U];
  require(offset <= size, ErrorCode::kUnsupportedFormat, "truncated geometry blob");
  WkbReader reader(data + offset, size - offset);
  reader.read_geometry(out);
}

PolygonSet read_gpkg(const std::filesystem::path& path) {
  require(std::filesystem::exists(path), ErrorCode::kIoError, "no such file '" + path.string() + "'");
  sqlite3* raw = nullptr;
  require(sqlite3_open_v2(path.c_str(), &raw, SQLITE_OPEN_READONLY, nullptr) == SQLITE_OK, ErrorCode::kIoError,
          "cannot open '" + path.string() + "'");
  Db db(raw);

  Stmt cols = prepare(db.get(),
                      "SELECT g.table_name, g.column_name, s.organization, s.organization_coordsys_id, s.srs_name "
                      "FROM gpkg_geometry_columns g JOIN gpkg_spatial_ref_sys s ON g.srs_id = s.srs_id "
                      "ORDER BY g.table_name LIMIT 1");
  require(sqlite3_step(cols.get()) == SQLITE_ROW, ErrorCode::kUnsupportedFormat,
          "'" + path.string() + "' has no geometry table");
  const std::string table = column_text(cols.get(), 0);
  const std::string column = column_text(cols.get(), 1);
  const std::string organization = column_text(cols.get(), 2);
  const int coordsys = sqlite3_column_int(cols.get(), 3);
  const std::string srs_name = column_text(cols.get(), 4);

  PolygonSet set;
  if (!organization.empty() && coordsys > 0 &&
      std::find_if(organization.begin(), organization.end(), [](char c) { return c == ' '; }) == organization.end() &&
      organization != "NONE" && organization != "burnseg") {
    std::string org = organization;
    std::transform(org.begin(), org.end(), org.begin(), [](unsigned char c) { return std::toupper(c); });
    set.crs_id = org + ":" + std::to_string(coordsys);
  } else {
    set.crs_id = srs_name;
  }

  auto quote = [](const std::string& ident) {
    std::string out = "\"";
    for (char c : ident) {
      out += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return out + "\"";
  };
  Stmt rows = prepare(db.get(), "SELECT " + quote(column) + " FROM " + quote(table));
  while (sqlite3_step(rows.get()) == SQLITE_ROW) {
    const auto* blob = static_cast<const unsigned char*>(sqlite3_column_blob(rows.get(), 0));
    const int bytes = sqlite3_column_bytes(rows.get(), 0);
    if (blob && bytes > 0) {
      parse_gpkg_blob(blob, static_cast<std::size_t>(bytes), set.polygons);
    }
  }
  return set;
}

void append_u32(std::string& out, std::uint32_t v) { out.append(reinterpret_cast<const char*>(&v), 4); }
void append_i32(std::string& out, std::int32_t v) { out.append(reinterpret_cast<const char*>(&v), 4); }
void append_f64(std::string& out, double v) { out.append(reinterpret_cast<const char*>(&v), 8); }

void append_ring(std::string& out, const Ring& ring) {
  append_u32(out, static_cast<std::uint32_t>(ring.size() + 1));
  for (const Point& p : ring) {
    append_f64(out, p.x);
    append_f64(out, p.y);
  }
  append_f64(out, ring.front().x);
  append_f64(out, ring.front().y);
}

std::string gpkg_blob(const Polygon& polygon, std::int32_t srs_id) {
  std::string out = {'G', 'P', 0, 1};  // version 0, little-endian, no envelope
  append_i32(out, srs_id);
  out.push_back(1);
  append_u32(out, 3);
  append_u32(out, static_cast<std::uint32_t>(1 + polygon.holes.size()));
  append_ring(out, polygon.outer);
  for (const Ring& hole : polygon.holes) {
    append_ring(out, hole);
  }
  return out;
}

void write_gpkg(const PolygonSet& set, const std::filesystem::path& path) {
  std::error_code ec;
  std::filesystem::remove(path, ec);
  sqlite3* raw = nullptr;
  require(sqlite3_open(path.c_str(), &raw) == SQLITE_OK, ErrorCode::kIoError, "cannot create '" + path.string() + "'");
  Db db(raw);

  std::string organization = "burnseg";
  std::int32_t srs_id = 100000;
  const auto colon = set.crs_id.find(':');
  if (colon != std::string::npos) {
    const std::string code = set.crs_id.substr(colon + 1);
    if (!code.empty() && std::all_of(code.begin(), code.end(), [](unsigned char c) { return std::isdigit(c); })) {
      organization = set.crs_id.substr(0, colon);
      srs_id = std::stoi(code);
    }
  }
  exec(db.get(), "PRAGMA application_id = 1196444487; PRAGMA user_version = 10300;");
  exec(db.get(),
       "CREATE TABLE gpkg_spatial_ref_sys (srs_name TEXT NOT NULL, srs_id INTEGER PRIMARY KEY, "
       "organization TEXT NOT NULL, organization_coordsys_id INTEGER NOT NULL, definition TEXT NOT NULL, "
       "description TEXT);"
       "CREATE TABLE gpkg_contents (table_name TEXT NOT NULL PRIMARY KEY, data_type TEXT NOT NULL, "
       "identifier TEXT UNIQUE, description TEXT DEFAULT '', last_change DATETIME NOT NULL DEFAULT "
       "'2000-01-01T00:00:00.000Z', min_x DOUBLE, min_y DOUBLE, max_x DOUBLE, max_y DOUBLE, srs_id INTEGER);"
       "CREATE TABLE gpkg_geometry_columns (table_name TEXT NOT NULL, column_name TEXT NOT NULL, "
       "geometry_type_name TEXT NOT NULL, srs_id INTEGER NOT NULL, z TINYINT NOT NULL, m TINYINT NOT NULL, "
       "CONSTRAINT pk_geom_cols PRIMARY KEY (table_name, column_name));"
       "CREATE TABLE features (fid INTEGER PRIMARY KEY AUTOINCREMENT, geom POLYGON);");

  Stmt srs = prepare(db.get(), "INSERT INTO gpkg_spatial_ref_sys VALUES (?, ?, ?, ?, 'undefined', NULL)");
  sqlite3_bind_text(srs.get(), 1, set.crs_id.c_str(), -1, SQLITE_TRANSIENT);
  sqlite3_bind_int(srs.get(), 2, srs_id);
  sqlite3_bind_text(srs.get(), 3, organization.c_str(), -1, SQLITE_TRANSIENT);
  sqlite3_bind_int(srs.get(), 4, organization == "burnseg" ? 0 : srs_id);
  require(sqlite3_step(srs.get()) == SQLITE_DONE, ErrorCode::kIoError, sqlite3_errmsg(db.get()));

  Stmt contents = prepare(db.get(), "INSERT INTO gpkg_contents (table_name, data_type, identifier, srs_id) "
                                    "VALUES ('features', 'features', 'features', ?)");
  sqlite3_bind_int(contents.get(), 1, srs_id);
  require(sqlite3_step(contents.get()) == SQLITE_DONE, ErrorCode::kIoError, sqlite3_errmsg(db.get()));

  Stmt columns = prepare(db.get(), "INSERT INTO gpkg_geometry_columns VALUES ('features', 'geom', 'POLYGON', ?, 0, 0)");
  sqlite3_bind_int(columns.get(), 1, srs_id);
  require(sqlite3_step(columns.get()) == SQLITE_DONE, ErrorCode::kIoError, sqlite3_errmsg(db.get()));

  exec(db.get(), "BEGIN");
  Stmt insert = prepare(db.get(), "INSERT INTO features (geom) VALUES (?)");
  for (const Polygon& polygon : set.polygons) {
    const std::string blob = gpkg_blob(polygon, srs_id);
    sqlite3_bind_blob(insert.get(), 1, blob.data(), static_cast<int>(blob.size()), SQLITE_TRANSIENT);
    require(sqlite3_step(insert.get()) == SQLITE_DONE, ErrorCode::kIoError, sqlite3_errmsg(db.get()));
    sqlite3_reset(insert.get());
  }
  exec(db.get(), "COMMIT");
}

}  // namespace

std::string normalize_crs_name(const std::string& name) {
  static const std::regex urn(R"(urn:ogc:def:crs:([A-Za-z]+):[0-9.]*:([0-9A-Za-z]+))");
  std::smatch m;
  if (std::regex_match(name, m, urn)) {
    std::string authority = m[1].str();
    std::transform(authority.begin(), authority.end(), authority.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    return authority + ":" + m[2].str();
  }
  return name;
}

PolygonSet read_polygons(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".geojson" || ext == ".json") {
    return read_geojson(path);
  }
  if (ext == ".gpkg") {
    return read_gpkg(path);
  }
  fail(ErrorCode::kUnsupportedFormat, "unsupported vector format '" + path.string() + "'");
}

void write_polygons(const PolygonSet& set, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  const std::string ext = lower_extension(path);
  if (ext == ".geojson" || ext == ".json") {
    write_geojson(set, path);
  } else if (ext == ".gpkg") {
    write_gpkg(set, path);
  } else {
    fail(ErrorCode::kUnsupportedFormat, "unsupported vector format '" + path.string() + "'");
  }
}

}  // namespace burnseg
