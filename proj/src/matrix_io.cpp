#include "opcomm/matrix_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "opcomm/errors.hpp"

namespace opcomm {

nlohmann::json to_json(const Matrix& m)
{
    auto data = m.data();
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::vector<double>(data.begin(), data.end())}};
}

Matrix matrix_from_json(const nlohmann::json& j)
{
    try {
        const auto rows = j.at("rows").get<std::size_t>();
        const auto cols = j.at("cols").get<std::size_t>();
        auto data = j.at("data").get<std::vector<double>>();
        return Matrix(rows, cols, std::move(data));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("matrix JSON: ") + e.what());
    }
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view field, std::size_t line)
{
    field = trim(field);
    if (!field.empty() && field.front() == '+')
        field.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
        throw InputError("CSV line " + std::to_string(line) + ": cannot parse '" + std::string(field) +
                         "' as a number");
    return value;
}

} // namespace

Matrix parse_csv(std::string_view text)
{
    std::vector<double> data;
    std::size_t rows = 0, cols = 0, line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        line = trim(line);
        if (line.empty())
            continue;
        std::size_t count = 0;
        while (true) {
            const auto comma = line.find(',');
            data.push_back(parse_number(line.substr(0, comma), line_no));
            ++count;
            if (comma == std::string_view::npos)
                break;
            line = line.substr(comma + 1);
        }
        if (rows == 0)
            cols = count;
        else if (count != cols)
            throw InputError("CSV line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                             " fields, found " + std::to_string(count));
        ++rows;
    }
    if (rows == 0)
        throw InputError("CSV input is empty");
    return Matrix(rows, cols, std::move(data));
}

Matrix parse_matrix(std::string_view text)
{
    const auto body = trim(text);
    if (!body.empty() && body.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const nlohmann::json::parse_error& e) {
            throw InputError(std::string("matrix JSON: ") + e.what());
        }
        return matrix_from_json(j);
    }
    return parse_csv(body);
}

Matrix read_matrix(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open matrix file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_matrix(buf.str());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j)
{
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out)
        throw InputError("write failed for " + path.string());
}

void write_matrix(const std::filesystem::path& path, const Matrix& m)
{
    write_json(path, to_json(m));
}

} // namespace opcomm
