#include "nvlab/io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nv {

std::string fmt_g17(double x) {
    if (!std::isfinite(x)) return "NA";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<double>& values) {
    if (values.size() != columns_.size())
        throw std::invalid_argument("CsvTable: column count mismatch");
    std::string row;
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) row += ',';
        row += fmt_g17(values[i]);
    }
    rows_.push_back(std::move(row));
}

void CsvTable::add_row_mixed(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size())
        throw std::invalid_argument("CsvTable: column count mismatch");
    std::string row;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ',';
        row += cells[i];
    }
    rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
    std::string out;
    for (size_t i = 0; i < columns_.size(); ++i) {
        if (i) out += ',';
        out += columns_[i];
    }
    out += '\n';
    for (const auto& r : rows_) {
        out += r;
        out += '\n';
    }
    return out;
}

void CsvTable::write(const std::string& path) const { write_text_file(path, str()); }

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
}

namespace {

bool little_endian() {
    const uint16_t probe = 1;
    return *reinterpret_cast<const uint8_t*>(&probe) == 1;
}

}  // namespace

void write_snapshot(const std::string& base_path, const RealField2D& f, double time, double E) {
    const std::string bin = base_path + ".bin";
    const std::string hdr = base_path + ".json";
    {
        std::ofstream b(bin, std::ios::binary);
        if (!b) throw std::runtime_error("cannot open for writing: " + bin);
        b.write(reinterpret_cast<const char*>(f.a.data()),
                std::streamsize(f.a.size() * sizeof(double)));
    }
    nlohmann::json j;
    j["format"] = "nvlab-field-v1";
    j["grid"] = {{"nx", f.grid.nx}, {"ny", f.grid.ny}, {"Lx", f.grid.Lx}, {"Ly", f.grid.Ly}};
    j["time"] = time;
    j["E"] = E;
    j["endianness"] = little_endian() ? "little" : "big";
    j["layout"] = "row-major";
    j["dtype"] = "float64";
    size_t slash = bin.find_last_of('/');
    j["data_file"] = (slash == std::string::npos) ? bin : bin.substr(slash + 1);
    write_text_file(hdr, j.dump(2) + "\n");
}

Snapshot read_snapshot(const std::string& json_path) {
    std::ifstream h(json_path);
    if (!h) throw std::runtime_error("cannot open: " + json_path);
    nlohmann::json j;
    h >> j;
    GridSpec g;
    g.nx = j.at("grid").at("nx").get<int>();
    g.ny = j.at("grid").at("ny").get<int>();
    g.Lx = j.at("grid").at("Lx").get<double>();
    g.Ly = j.at("grid").at("Ly").get<double>();
    Snapshot s;
    s.field = RealField2D(g);
    s.time = j.at("time").get<double>();
    s.E = j.at("E").get<double>();
    std::string data = j.at("data_file").get<std::string>();
    size_t slash = json_path.find_last_of('/');
    if (slash != std::string::npos && data.find('/') == std::string::npos)
        data = json_path.substr(0, slash + 1) + data;
    std::ifstream b(data, std::ios::binary);
    if (!b) throw std::runtime_error("cannot open: " + data);
    b.read(reinterpret_cast<char*>(s.field.a.data()),
           std::streamsize(s.field.a.size() * sizeof(double)));
    if (!b) throw std::runtime_error("short read: " + data);
    return s;
}

void write_manifest(const std::string& path, const std::string& resolved_config_json) {
    nlohmann::json j = nlohmann::json::parse(resolved_config_json);
    j["tool_version"] = kToolVersion;
    const auto now = std::chrono::system_clock::now();
    j["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    write_text_file(path, j.dump(2) + "\n");
}

}  // namespace nv
