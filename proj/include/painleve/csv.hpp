// CSV emission (RFC-4180-style quoting, dot decimal separator, 17 significant
// digits) and line-oriented key=value parsing.
#ifndef PAINLEVE_CSV_HPP
#define PAINLEVE_CSV_HPP

#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace painleve::csv {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

class Writer {
public:
    explicit Writer(std::ostream& os) : os_(os) {}

    void header(const std::vector<std::string>& names) { write_row_(names); }

    void row(const std::vector<std::string>& fields) { write_row_(fields); }

    Writer& field(const std::string& s) { pending_.push_back(s); return *this; }
    Writer& field(double v) { pending_.push_back(format_double(v)); return *this; }
    Writer& field(long long v) { pending_.push_back(std::to_string(v)); return *this; }
    Writer& field(int v) { pending_.push_back(std::to_string(v)); return *this; }
    void end_row() { write_row_(pending_); pending_.clear(); }

private:
    void write_row_(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) os_ << ',';
            os_ << quote(fields[i]);
        }
        os_ << '\n';
    }
    std::ostream& os_;
    std::vector<std::string> pending_;
};

// `key = value` per line, '#' starts a comment, blank lines ignored.
std::map<std::string, std::string> parse_key_value(std::istream& is);

// Split one CSV line (no embedded newlines).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace painleve::csv

#endif
