#include "tecost/channel_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace tecost {

using nlohmann::json;

namespace {

std::string num17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_matrix(std::ostringstream& os, const Matrix& m, const std::string& indent) {
    os << "[\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        os << indent << "  [";
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) os << ", ";
            os << '[' << num17(m(r, c).real()) << ", " << num17(m(r, c).imag()) << ']';
        }
        os << (r + 1 < m.rows() ? "],\n" : "]\n");
    }
    os << indent << ']';
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw FormatError("unknown field \"" + it.key() + "\"");
    }
}

std::size_t read_dim(const json& j) {
    if (!j.contains("dim")) throw FormatError("missing field \"dim\"");
    const json& d = j.at("dim");
    if (!d.is_number_integer() || d.get<long long>() < 1) throw FormatError("\"dim\" must be a positive integer");
    return static_cast<std::size_t>(d.get<long long>());
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("malformed JSON: ") + e.what());
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols, const std::string& what) {
    if (!j.is_array() || j.size() != rows)
        throw FormatError(what + ": expected an array of " + std::to_string(rows) + " rows");
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const json& row = j[r];
        if (!row.is_array() || row.size() != cols)
            throw FormatError(what + ": row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries");
        for (std::size_t c = 0; c < cols; ++c) {
            const json& e = row[c];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw FormatError(what + ": entry (" + std::to_string(r) + "," + std::to_string(c) +
                                  ") must be [re, im]");
            m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

json channel_to_json(const KrausChannel& ch) {
    json ks = json::array();
    for (const auto& k : ch.ops()) ks.push_back(matrix_to_json(k));
    return {{"dim", ch.dim()}, {"kraus", ks}};
}

KrausChannel channel_from_json(const json& j) {
    if (!j.is_object()) throw FormatError("channel file must hold a JSON object");
    reject_unknown(j, {"dim", "kraus"});
    const std::size_t n = read_dim(j);
    if (!j.contains("kraus") || !j.at("kraus").is_array() || j.at("kraus").empty())
        throw FormatError("\"kraus\" must be a non-empty array of matrices");
    std::vector<Matrix> ops;
    for (std::size_t k = 0; k < j.at("kraus").size(); ++k)
        ops.push_back(matrix_from_json(j.at("kraus")[k], n, n, "kraus[" + std::to_string(k) + "]"));
    const std::string why = channel_defect(n, ops, kChannelTol);
    if (!why.empty()) throw FormatError("invalid channel: " + why);
    return KrausChannel(n, std::move(ops));
}

json unitary_to_json(const Matrix& u) { return {{"dim", u.rows()}, {"matrix", matrix_to_json(u)}}; }

Matrix unitary_from_json(const json& j) {
    if (!j.is_object()) throw FormatError("unitary file must hold a JSON object");
    reject_unknown(j, {"dim", "matrix"});
    const std::size_t n = read_dim(j);
    if (!j.contains("matrix")) throw FormatError("missing field \"matrix\"");
    return matrix_from_json(j.at("matrix"), n, n, "matrix");
}

std::string channel_to_string(const KrausChannel& ch) {
    std::ostringstream os;
    os << "{\n  \"dim\": " << ch.dim() << ",\n  \"kraus\": [\n";
    for (std::size_t k = 0; k < ch.count(); ++k) {
        os << "    ";
        write_matrix(os, ch.op(k), "    ");
        os << (k + 1 < ch.count() ? ",\n" : "\n");
    }
    os << "  ]\n}\n";
    return os.str();
}

KrausChannel channel_from_string(const std::string& text) { return channel_from_json(parse_text(text)); }

KrausChannel read_channel_file(const std::string& path) { return channel_from_string(slurp(path)); }

void write_channel_file(const std::string& path, const KrausChannel& ch) { spill(path, channel_to_string(ch)); }

void write_unitary_file(const std::string& path, const Matrix& u) {
    std::ostringstream os;
    os << "{\n  \"dim\": " << u.rows() << ",\n  \"matrix\": ";
    write_matrix(os, u, "  ");
    os << "\n}\n";
    spill(path, os.str());
}

Matrix read_unitary_file(const std::string& path) { return unitary_from_json(parse_text(slurp(path))); }

}  // namespace tecost
