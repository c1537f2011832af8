#include "qkdcal/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qkdcal {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw io_error("malformed JSON input");
    return j;
}

}  // namespace

DataMatrix data_matrix_from_json(const std::string& text) {
    const json j = parse(text);
    if (!j.is_object() || !j.contains("d")) throw io_error("expected object with key \"d\"");
    const json& rows = j["d"];
    if (!rows.is_array() || rows.size() != 3) throw io_error("\"d\" must be a 3x3 array");
    DataMatrix m;
    for (int i = 0; i < 3; ++i) {
        if (!rows[i].is_array() || rows[i].size() != 3)
            throw io_error("\"d\" must be a 3x3 array");
        for (int k = 0; k < 3; ++k) {
            if (!rows[i][k].is_number()) throw io_error("\"d\" entries must be numbers");
            m.d[i][k] = rows[i][k].get<double>();
        }
    }
    const Feasibility f = validate_data(m);
    if (!f.ok) throw infeasible_error("data matrix invalid: " + f.detail);
    return m;
}

std::string data_matrix_to_json(const DataMatrix& d) {
    json j;
    j["d"] = d.d;
    return j.dump();
}

std::string estimated_to_json(const EstimatedDataMatrix& e) {
    json j;
    auto cell = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
    json rows = json::array();
    json errs = json::array();
    for (int i = 0; i < 3; ++i) {
        json row = json::array(), err = json::array();
        for (int k = 0; k < 3; ++k) {
            row.push_back(cell(e.d.d[i][k]));
            err.push_back(cell(e.stderr_est[i][k]));
        }
        rows.push_back(row);
        errs.push_back(err);
    }
    j["d"] = rows;
    j["counts"] = e.counts;
    j["stderr"] = errs;
    return j.dump();
}

TwoQubitState state_from_json(const std::string& text) {
    const json j = parse(text);
    if (!j.is_object() || !j.contains("rho")) throw io_error("expected object with key \"rho\"");
    const json& rows = j["rho"];
    if (!rows.is_array() || rows.size() != 4) throw io_error("\"rho\" must be a 4x4 array");
    TwoQubitState st;
    for (int i = 0; i < 4; ++i) {
        if (!rows[i].is_array() || rows[i].size() != 4)
            throw io_error("\"rho\" must be a 4x4 array");
        for (int k = 0; k < 4; ++k) {
            const json& c = rows[i][k];
            if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
                throw io_error("\"rho\" entries must be [re, im] pairs");
            st.rho.at(i, k) = cplx(c[0].get<double>(), c[1].get<double>());
        }
    }
    st.validate();
    return st;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw io_error("read failure on " + path);
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << content;
    if (!out.good()) throw io_error("write failure on " + path);
}

}  // namespace qkdcal
