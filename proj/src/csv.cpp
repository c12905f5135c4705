#include "ideate/csv.hpp"

namespace ideate::csv {

std::vector<Row> parse(std::string_view text) {
    std::vector<Row> rows;
    Row row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false; // row has at least one field character or separator

    std::size_t i = 0;
    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
        field_started = false;
    };

    while (i < text.size()) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                    continue;
                }
                in_quotes = false;
                ++i;
                continue;
            }
            field.push_back(c);
            ++i;
            continue;
        }
        switch (c) {
        case '"':
            in_quotes = true;
            field_started = true;
            ++i;
            break;
        case ',':
            end_field();
            field_started = true;
            ++i;
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
            end_row();
            ++i;
            break;
        case '\n':
            end_row();
            ++i;
            break;
        default:
            field.push_back(c);
            field_started = true;
            ++i;
            break;
        }
    }
    if (field_started || !field.empty()) end_row();
    return rows;
}

std::string escape_field(std::string_view field) {
    bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_row(const Row& row) {
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out.push_back(',');
        out += escape_field(row[i]);
    }
    out.push_back('\n');
    return out;
}

} // namespace ideate::csv
