#pragma once

#include <string>
#include <vector>

#include "nvlab/grid.hpp"

namespace nv {

inline constexpr const char* kToolVersion = "nvlab 0.1.0";

/// Shortest round-trip decimal form of a double (deterministic output).
std::string fmt_g17(double x);

/// One CSV table with fixed columns; all numeric cells are rendered with
/// fmt_g17, non-finite values as "NA".
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> columns);
    void add_row(const std::vector<double>& values);
    void add_row_mixed(const std::vector<std::string>& cells);
    std::string str() const;
    void write(const std::string& path) const;

  private:
    std::vector<std::string> columns_;
    std::vector<std::string> rows_;
};

void write_text_file(const std::string& path, const std::string& content);

/// Flat binary snapshot (row-major float64) plus a JSON header.
void write_snapshot(const std::string& base_path, const RealField2D& f, double time, double E);
struct Snapshot {
    RealField2D field;
    double time = 0.0;
    double E = -1.0;
};
Snapshot read_snapshot(const std::string& json_path);

/// Run manifest: resolved configuration echo, tool version and a timestamp
/// (the only place a timestamp appears).
void write_manifest(const std::string& path, const std::string& resolved_config_json);

}  // namespace nv
