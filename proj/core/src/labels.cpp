#include "clusterlens/labels.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "clusterlens/errors.hpp"

namespace clusterlens {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

ClassId parse_id(const std::string& field, std::size_t line_no, const char* what) {
    ClassId value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw error(errc::parse_error,
                    std::string("line ") + std::to_string(line_no) + ": '" + field + "' is not a valid " + what);
    if (value < 0)
        throw error(errc::parse_error,
                    std::string("line ") + std::to_string(line_no) + ": " + what + " must be non-negative, got " + field);
    return value;
}

}  // namespace

LabelTable load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::io_failure, "cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(in, line))
        throw error(errc::missing_column, "'" + path + "' is empty, expected a header row");

    const auto header = split_csv_line(line);
    const bool with_names = header.size() == 5;
    if (header.size() != 3 && header.size() != 5)
        throw error(errc::missing_column,
                    "'" + path + "' header has " + std::to_string(header.size()) +
                        " columns, expected sample_index,superclass_id,subclass_id[,superclass_name,subclass_name]");
    const char* expected[5] = {"sample_index", "superclass_id", "subclass_id", "superclass_name", "subclass_name"};
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] != expected[c])
            throw error(errc::missing_column,
                        "'" + path + "' header column " + std::to_string(c) + " is '" + header[c] +
                            "', expected '" + expected[c] + "'");
    }

    struct Row {
        ClassId superclass, subclass;
        std::string super_name, sub_name;
    };
    std::map<ClassId, Row> rows;  // keyed by sample_index
    std::map<ClassId, ClassId> subclass_owner;

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw error(errc::parse_error,
                        "line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(fields.size()));
        const ClassId index = parse_id(fields[0], line_no, "sample_index");
        Row row;
        row.superclass = parse_id(fields[1], line_no, "superclass_id");
        row.subclass = parse_id(fields[2], line_no, "subclass_id");
        if (with_names) {
            row.super_name = fields[3];
            row.sub_name = fields[4];
        }
        if (!rows.emplace(index, row).second)
            throw error(errc::duplicate_index,
                        "line " + std::to_string(line_no) + ": sample_index " + std::to_string(index) +
                            " appears more than once");
        auto [it, inserted] = subclass_owner.emplace(row.subclass, row.superclass);
        if (!inserted && it->second != row.superclass)
            throw error(errc::subclass_in_two_superclasses,
                        "subclass " + std::to_string(row.subclass) + " is listed under superclasses " +
                            std::to_string(it->second) + " and " + std::to_string(row.superclass));
    }

    const std::size_t n = rows.size();
    LabelTable table;
    table.superclass.resize(n);
    table.subclass.resize(n);
    for (const auto& [index, row] : rows) {
        if (static_cast<std::size_t>(index) >= n)
            throw error(errc::parse_error,
                        "sample_index " + std::to_string(index) + " out of range for a table of " +
                            std::to_string(n) + " rows (indices must cover 0.." + std::to_string(n - 1) + ")");
        table.superclass[static_cast<std::size_t>(index)] = row.superclass;
        table.subclass[static_cast<std::size_t>(index)] = row.subclass;
        if (with_names) {
            table.superclass_names[row.superclass] = row.super_name;
            table.subclass_names[row.subclass] = row.sub_name;
        }
    }
    return table;
}

void save_labels(const LabelTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw error(errc::io_failure, "cannot open '" + path + "' for writing");
    const bool with_names = table.has_names();
    out << "sample_index,superclass_id,subclass_id";
    if (with_names) out << ",superclass_name,subclass_name";
    out << "\n";
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << i << ',' << table.superclass[i] << ',' << table.subclass[i];
        if (with_names) {
            const auto super_it = table.superclass_names.find(table.superclass[i]);
            const auto sub_it = table.subclass_names.find(table.subclass[i]);
            out << ',' << (super_it != table.superclass_names.end() ? super_it->second : std::string())
                << ',' << (sub_it != table.subclass_names.end() ? sub_it->second : std::string());
        }
        out << "\n";
    }
    if (!out) throw error(errc::io_failure, "write to '" + path + "' failed");
}

void validate_labels(const LabelTable& table) {
    if (table.superclass.size() != table.subclass.size())
        throw error(errc::length_mismatch, "superclass and subclass columns differ in length");
    std::map<ClassId, ClassId> owner;
    for (std::size_t i = 0; i < table.size(); ++i) {
        auto [it, inserted] = owner.emplace(table.subclass[i], table.superclass[i]);
        if (!inserted && it->second != table.superclass[i])
            throw error(errc::subclass_in_two_superclasses,
                        "subclass " + std::to_string(table.subclass[i]) + " is listed under superclasses " +
                            std::to_string(it->second) + " and " + std::to_string(table.superclass[i]));
    }
}

void validate_dataset(const LabeledDataset& ds) {
    if (ds.embeddings.n != ds.labels.size())
        throw error(errc::length_mismatch,
                    "embedding matrix has " + std::to_string(ds.embeddings.n) + " rows but label table has " +
                        std::to_string(ds.labels.size()));
    validate_labels(ds.labels);
}

}  // namespace clusterlens
