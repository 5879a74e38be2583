#pragma once

#include <concepts>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hebbsync::csv {

/// Shortest representation that round-trips to the same double. NaN and
/// infinities are written as `nan`, `inf`, `-inf`.
[[nodiscard]] std::string format(double value);

/// Writes comma-separated fields terminated by a newline.
class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    Writer& field(std::string_view text);
    Writer& field(const char* text) { return field(std::string_view(text)); }
    Writer& field(const std::string& text) { return field(std::string_view(text)); }
    Writer& field(double value);
    Writer& field(bool value) { return field(std::string_view(value ? "1" : "0")); }

    template <std::integral T>
        requires(!std::same_as<T, bool>)
    Writer& field(T value) {
        return field(std::string_view(std::to_string(value)));
    }
    void end_row();

    void row(const std::vector<std::string>& fields);

private:
    std::ostream& out_;
    bool first_ = true;
};

/// Minimal reader for the files this project writes: no quoting, no embedded
/// commas.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::size_t column(std::string_view name) const;
};

[[nodiscard]] Table read(std::istream& in);
[[nodiscard]] double to_double(std::string_view text);

}  // namespace hebbsync::csv
