#include "hebbsync/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hebbsync::csv {

std::string format(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("csv: cannot format value");
    }
    return {buf.data(), ptr};
}

Writer& Writer::field(std::string_view text) {
    if (!first_) out_ << ',';
    out_ << text;
    first_ = false;
    return *this;
}

Writer& Writer::field(double value) { return field(std::string_view(format(value))); }

void Writer::end_row() {
    out_ << '\n';
    first_ = true;
}

void Writer::row(const std::vector<std::string>& fields) {
    for (const auto& f : fields) field(std::string_view(f));
    end_row();
}

std::size_t Table::column(std::string_view name) const {
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (header[k] == name) return k;
    }
    throw std::out_of_range("csv: no column named " + std::string(name));
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

Table read(std::istream& in) {
    Table t;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("csv: empty input");
    }
    t.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != t.header.size()) {
            throw std::runtime_error("csv: row width does not match header");
        }
        t.rows.push_back(std::move(cells));
    }
    return t;
}

double to_double(std::string_view text) {
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("csv: not a number: " + std::string(text));
    }
    return v;
}

}  // namespace hebbsync::csv
