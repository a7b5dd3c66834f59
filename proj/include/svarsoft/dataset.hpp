#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace svarsoft {

enum class Transform { None, Log, Log100, Growth };

Transform parse_transform(const std::string& name);

/// Monthly panel: `dates` are YYYY-MM, strictly increasing and contiguous.
struct Dataset {
    std::vector<std::string> variables;
    std::vector<std::string> dates;
    Eigen::MatrixXd values;  ///< T x n

    int length() const { return static_cast<int>(values.rows()); }
    int n() const { return static_cast<int>(values.cols()); }
};

/// Per-variable transforms applied at load. log100 is 100 x log; growth is 100 x the log difference
/// and drops the first month for every variable.
using TransformSpec = std::map<std::string, Transform>;

/** Reads `date,<var1>,...`. Throws ParseError (with the line number), GapInDates or
 * NonPositiveForLog. Names in `transforms` must be columns of the file (UnknownVariable).
 */
Dataset load_dataset(const std::filesystem::path& path, const TransformSpec& transforms = {});
Dataset parse_dataset(const std::string& text, const TransformSpec& transforms = {});

/// Writes the same layout with %.17g values, so save then load is exact.
void save_dataset(const Dataset& data, const std::filesystem::path& path);

/// Months since 0000-01 for a YYYY-MM string; throws ParseError on bad input.
int month_index(const std::string& date);
std::string month_string(int index);

}  // namespace svarsoft
