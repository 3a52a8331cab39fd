#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace affine_smile::cli {

/// Shortest text that round-trips: 17 significant digits, "inf"/"-inf"/"nan" otherwise.
std::string format_number(double v);

/// Header plus rows of already formatted cells; serializes with '\n' line ends.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    CsvTable& row(std::vector<std::string> cells);
    std::string str() const;
    void write(const std::filesystem::path& path) const;

    std::size_t rows() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace affine_smile::cli
