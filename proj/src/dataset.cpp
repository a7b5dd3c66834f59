#include "svarsoft/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "svarsoft/error.hpp"

namespace svarsoft {

Transform parse_transform(const std::string& name) {
    if (name == "none" || name == "level") return Transform::None;
    if (name == "log") return Transform::Log;
    if (name == "log100") return Transform::Log100;
    if (name == "growth") return Transform::Growth;
    throw Error(ErrorCode::ConfigError, "unknown transform '" + name + "' (expected none, log, log100 or growth)");
}

int month_index(const std::string& date) {
    int year = 0, month = 0;
    if (date.size() != 7 || date[4] != '-' ||
        std::from_chars(date.data(), date.data() + 4, year).ptr != date.data() + 4 ||
        std::from_chars(date.data() + 5, date.data() + 7, month).ptr != date.data() + 7 || month < 1 ||
        month > 12)
        throw Error(ErrorCode::ParseError, "bad date '" + date + "' (expected YYYY-MM)");
    return year * 12 + (month - 1);
}

std::string month_string(int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", index / 12, index % 12 + 1);
    return buf;
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

[[noreturn]] void parse_error(int line, const std::string& what) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

Dataset parse_dataset(const std::string& text, const TransformSpec& transforms) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    Dataset raw;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        auto fields = split(line);
        for (auto& f : fields) f = trim(f);
        if (raw.variables.empty()) {
            if (fields.size() < 2 || fields.front() != "date")
                parse_error(line_no, "header must be `date,<var1>,...`");
            raw.variables.assign(fields.begin() + 1, fields.end());
            continue;
        }
        if (fields.size() != raw.variables.size() + 1)
            parse_error(line_no, "expected " + std::to_string(raw.variables.size() + 1) + " fields, got " +
                                     std::to_string(fields.size()));
        try {
            month_index(fields[0]);
        } catch (const Error& e) {
            parse_error(line_no, e.what());
        }
        std::vector<double> row;
        for (std::size_t k = 1; k < fields.size(); ++k) {
            double v = 0.0;
            const auto& f = fields[k];
            const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
            if (f.empty() || res.ec != std::errc() || res.ptr != f.data() + f.size() || !std::isfinite(v))
                parse_error(line_no, "bad number '" + f + "' in column " + raw.variables[k - 1]);
            row.push_back(v);
        }
        raw.dates.push_back(fields[0]);
        rows.push_back(std::move(row));
    }
    if (raw.variables.empty()) throw Error(ErrorCode::ParseError, "dataset has no header");
    if (rows.empty()) throw Error(ErrorCode::InsufficientData, "dataset has no observations");
    for (std::size_t t = 1; t < raw.dates.size(); ++t)
        if (month_index(raw.dates[t]) != month_index(raw.dates[t - 1]) + 1)
            throw Error(ErrorCode::GapInDates, "dates must be consecutive months: " + raw.dates[t - 1] +
                                                   " is followed by " + raw.dates[t]);

    const auto n = static_cast<Eigen::Index>(raw.variables.size());
    const auto t_len = static_cast<Eigen::Index>(rows.size());
    raw.values.resize(t_len, n);
    for (Eigen::Index t = 0; t < t_len; ++t)
        for (Eigen::Index k = 0; k < n; ++k) raw.values(t, k) = rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];

    std::vector<Transform> plan(static_cast<std::size_t>(n), Transform::None);
    for (const auto& [name, tr] : transforms) {
        const auto it = std::find(raw.variables.begin(), raw.variables.end(), name);
        if (it == raw.variables.end())
            throw Error(ErrorCode::UnknownVariable, "transform for unknown variable '" + name + "'");
        plan[static_cast<std::size_t>(it - raw.variables.begin())] = tr;
    }
    const bool growth = std::find(plan.begin(), plan.end(), Transform::Growth) != plan.end();
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto tr = plan[static_cast<std::size_t>(k)];
        if (tr == Transform::None) continue;
        for (Eigen::Index t = 0; t < t_len; ++t)
            if (!(raw.values(t, k) > 0.0))
                throw Error(ErrorCode::NonPositiveForLog, raw.variables[static_cast<std::size_t>(k)] + " on " +
                                                              raw.dates[static_cast<std::size_t>(t)] +
                                                              " is not positive and cannot be logged");
    }
    if (!growth) {
        for (Eigen::Index k = 0; k < n; ++k)
            if (plan[static_cast<std::size_t>(k)] != Transform::None)
                raw.values.col(k) = raw.values.col(k).array().log().matrix() *
                                    (plan[static_cast<std::size_t>(k)] == Transform::Log100 ? 100.0 : 1.0);
        return raw;
    }
    if (t_len < 2) throw Error(ErrorCode::InsufficientData, "growth rates need at least two observations");
    Dataset out;
    out.variables = raw.variables;
    out.dates.assign(raw.dates.begin() + 1, raw.dates.end());
    out.values.resize(t_len - 1, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index t = 1; t < t_len; ++t) {
            switch (plan[static_cast<std::size_t>(k)]) {
                case Transform::None: out.values(t - 1, k) = raw.values(t, k); break;
                case Transform::Log: out.values(t - 1, k) = std::log(raw.values(t, k)); break;
                case Transform::Log100: out.values(t - 1, k) = 100.0 * std::log(raw.values(t, k)); break;
                case Transform::Growth:
                    out.values(t - 1, k) = 100.0 * (std::log(raw.values(t, k)) - std::log(raw.values(t - 1, k)));
                    break;
            }
        }
    }
    return out;
}

Dataset load_dataset(const std::filesystem::path& path, const TransformSpec& transforms) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open dataset " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_dataset(buffer.str(), transforms);
}

void save_dataset(const Dataset& data, const std::filesystem::path& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    std::fputs("date", f);
    for (const auto& v : data.variables) std::fprintf(f, ",%s", v.c_str());
    std::fputc('\n', f);
    for (int t = 0; t < data.length(); ++t) {
        std::fputs(data.dates[static_cast<std::size_t>(t)].c_str(), f);
        for (int k = 0; k < data.n(); ++k) std::fprintf(f, ",%.17g", data.values(t, k));
        std::fputc('\n', f);
    }
    std::fclose(f);
}

}  // namespace svarsoft
