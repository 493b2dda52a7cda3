#pragma once

// Minimal CSV support for the fixture and report dialect: comma separator,
// '.' decimal point, UTF-8, one header row, no quoting or thousands
// separators.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "odpcba/errors.hpp"

namespace odpcba::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw MalformedRow("csv: missing column '" + name + "'");
    }
};

inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline Table parse(std::istream& in, const std::string& origin) {
    Table t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_line(line);
        if (t.header.empty()) {
            t.header = std::move(fields);
        } else {
            if (fields.size() != t.header.size())
                throw MalformedRow(origin + ":" + std::to_string(line_no) + ": expected " +
                                   std::to_string(t.header.size()) + " fields, got " + std::to_string(fields.size()));
            t.rows.push_back(std::move(fields));
        }
    }
    if (t.header.empty()) throw MalformedRow(origin + ": empty file");
    return t;
}

inline Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingFixture("cannot open " + path);
    return parse(in, path);
}

inline double to_double(const std::string& s, const std::string& origin) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw MalformedRow(origin + ": bad number '" + s + "'");
    }
}

inline int to_int(const std::string& s, const std::string& origin) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw MalformedRow(origin + ": bad integer '" + s + "'");
    }
}

class Writer {
public:
    explicit Writer(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw IoFailure("cannot write " + path);
    }
    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << fields[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

}  // namespace odpcba::csv
