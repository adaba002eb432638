#include "qsr/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qsr {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trimmed(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& raw, std::size_t row, std::size_t col) {
    const std::string text = trimmed(raw);
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw ParseError("unparsable number '" + raw + "'", row, col);
    return value;
}

nlohmann::json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return j;
}

Matrix matrix_from_flat(const nlohmann::json& arr, std::size_t rows, std::size_t cols,
                        const std::string& what) {
    if (!arr.is_array() || arr.size() != rows * cols)
        throw ParseError(what + ": expected " + std::to_string(rows * cols) + " values");
    Matrix out(rows, cols);
    std::size_t idx = 0;
    for (const auto& v : arr) {
        if (!v.is_number()) throw ParseError(what + ": non-numeric entry");
        out(idx / cols, idx % cols) = v.get<double>();
        ++idx;
    }
    return out;
}

// Minimal ordered JSON writer; doubles go through format_double.
class JsonWriter {
public:
    JsonWriter& begin() { return raw("{"); }
    JsonWriter& end() { return raw("}"); }
    JsonWriter& begin_array() { return raw("["); }
    JsonWriter& end_array() { return raw("]"); }
    JsonWriter& comma() { return raw(","); }
    JsonWriter& key(const char* name) {
        buf_ += '"';
        buf_ += name;
        buf_ += "\":";
        return *this;
    }
    JsonWriter& value(bool v) { return raw(v ? "true" : "false"); }
    JsonWriter& value(double v) { return raw(format_double(v).c_str()); }
    JsonWriter& value(std::size_t v) { return raw(std::to_string(v).c_str()); }
    JsonWriter& raw(const char* text) {
        buf_ += text;
        return *this;
    }
    const std::string& str() const { return buf_; }

private:
    std::string buf_;
};

void append_pe(JsonWriter& w, const PeReport& rep) {
    w.begin();
    w.key("order").value(rep.order).comma();
    w.key("rank").value(rep.rank).comma();
    w.key("required").value(rep.required).comma();
    w.key("gap").value(rep.gap).comma();
    w.key("per_shot_ranks").begin_array();
    for (std::size_t i = 0; i < rep.per_shot_ranks.size(); ++i) {
        if (i > 0) w.comma();
        w.value(rep.per_shot_ranks[i]);
    }
    w.end_array().comma();
    w.key("verdict").value(rep.verdict);
    w.end();
}

void append_precondition(JsonWriter& w, const PreconditionReport& rep) {
    w.begin();
    w.key("length_ok").value(rep.length_ok).comma();
    w.key("windowed_total").value(rep.windowed_total).comma();
    w.key("length_required").value(rep.length_required).comma();
    w.key("horizon_ok").value(rep.horizon_ok).comma();
    w.key("min_windowed").value(rep.min_windowed).comma();
    w.key("prefix_ok").value(rep.prefix_ok).comma();
    w.key("proof_bound_ok").value(rep.proof_bound_ok).comma();
    w.key("proof_bound_required").value(rep.proof_bound_required).comma();
    w.key("L").value(rep.horizon).comma();
    w.key("N").value(rep.window).comma();
    w.key("nu").value(rep.zero_prefix).comma();
    w.key("n_max").value(rep.order_bound).comma();
    w.key("pass").value(rep.all_ok());
    w.end();
}

void append_report(JsonWriter& w, const VerificationReport& rep) {
    w.begin();
    w.key("verdict").value(rep.verdict).comma();
    w.key("lambda_min").value(rep.lambda_min).comma();
    w.key("lambda_min_effective").value(rep.lambda_min_effective).comma();
    w.key("effective_scale").value(rep.effective_scale).comma();
    w.key("nu").value(rep.zero_prefix).comma();
    w.key("L").value(rep.horizon).comma();
    w.key("N").value(rep.window).comma();
    w.key("null_space_dim").value(rep.null_space_dim).comma();
    w.key("pe");
    append_pe(w, rep.pe);
    w.comma();
    w.key("precondition");
    append_precondition(w, rep.precondition);
    w.end();
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty file: " + path.string(), 1);
    const auto header = split_csv_line(line);
    if (header.empty() || trimmed(header.front()) != "k")
        throw ParseError("header must start with 'k'", 1, 1);

    std::size_t m = 0;
    std::size_t idx = 1;
    while (idx < header.size() && trimmed(header[idx]) == "u_" + std::to_string(m + 1)) {
        ++m;
        ++idx;
    }
    std::size_t p = 0;
    while (idx < header.size() && trimmed(header[idx]) == "y_" + std::to_string(p + 1)) {
        ++p;
        ++idx;
    }
    if (m == 0 || p == 0 || idx != header.size())
        throw ParseError("header must be k,u_1..u_m,y_1..y_p", 1, idx + 1);

    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> outputs;
    std::size_t row = 1;
    std::size_t expected_k = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trimmed(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " fields", row,
                             fields.size());
        const double k = parse_number(fields[0], row, 1);
        if (k != static_cast<double>(expected_k))
            throw ParseError("sample index must increase from 0 without gaps", row, 1);
        ++expected_k;
        std::vector<double> u(m), y(p);
        for (std::size_t i = 0; i < m; ++i) u[i] = parse_number(fields[1 + i], row, 2 + i);
        for (std::size_t i = 0; i < p; ++i)
            y[i] = parse_number(fields[1 + m + i], row, 2 + m + i);
        inputs.push_back(std::move(u));
        outputs.push_back(std::move(y));
    }
    if (inputs.empty()) throw ParseError("no samples in " + path.string(), row);
    return Trajectory(std::move(inputs), std::move(outputs));
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    out << "k";
    for (std::size_t i = 1; i <= traj.input_dim(); ++i) out << ",u_" << i;
    for (std::size_t i = 1; i <= traj.output_dim(); ++i) out << ",y_" << i;
    out << "\n";
    for (std::size_t k = 0; k < traj.raw_length(); ++k) {
        out << k;
        for (double v : traj.inputs()[k]) out << "," << format_double(v);
        for (double v : traj.outputs()[k]) out << "," << format_double(v);
        out << "\n";
    }
}

SupplyForm read_supply_json(const std::filesystem::path& path) {
    const nlohmann::json j = load_json(path);
    for (const char* field : {"N", "m", "p", "blocks"})
        if (!j.contains(field)) throw ParseError("supply file missing field '" + std::string(field) + "'");
    const auto window = j["N"].get<std::size_t>();
    const auto m = j["m"].get<std::size_t>();
    const auto p = j["p"].get<std::size_t>();
    std::vector<PhiBlock> blocks;
    for (const auto& blk : j["blocks"]) {
        PhiBlock b;
        b.i = blk.at("i").get<std::size_t>();
        b.j = blk.at("j").get<std::size_t>();
        b.value = matrix_from_flat(blk.at("matrix"), m + p, m + p, "supply block");
        blocks.push_back(std::move(b));
    }
    try {
        return assemble_phi_n(blocks, window, m, p);
    } catch (const std::invalid_argument& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string supply_to_json(const SupplyForm& form) {
    JsonWriter w;
    w.begin();
    w.key("N").value(form.window).comma();
    w.key("m").value(form.input_dim).comma();
    w.key("p").value(form.output_dim).comma();
    w.key("blocks").begin_array();
    const auto blocks = decompose_blocks(form);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (b > 0) w.comma();
        w.begin();
        w.key("i").value(blocks[b].i).comma();
        w.key("j").value(blocks[b].j).comma();
        w.key("matrix").begin_array();
        const Matrix& v = blocks[b].value;
        for (std::size_t i = 0; i < v.rows(); ++i)
            for (std::size_t jj = 0; jj < v.cols(); ++jj) {
                if (i + jj > 0) w.comma();
                w.value(v(i, jj));
            }
        w.end_array();
        w.end();
    }
    w.end_array();
    w.end();
    return w.str();
}

LtiSystem read_plant_json(const std::filesystem::path& path) {
    const nlohmann::json j = load_json(path);
    for (const char* field : {"n", "m", "p", "A", "B", "C", "D"})
        if (!j.contains(field)) throw ParseError("plant file missing field '" + std::string(field) + "'");
    const auto n = j["n"].get<std::size_t>();
    const auto m = j["m"].get<std::size_t>();
    const auto p = j["p"].get<std::size_t>();
    try {
        return LtiSystem(matrix_from_flat(j["A"], n, n, "A"), matrix_from_flat(j["B"], n, m, "B"),
                         matrix_from_flat(j["C"], p, n, "C"), matrix_from_flat(j["D"], p, m, "D"));
    } catch (const std::invalid_argument& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string plant_to_json(const LtiSystem& sys) {
    JsonWriter w;
    const auto flat = [&w](const Matrix& mat) {
        w.begin_array();
        for (std::size_t i = 0; i < mat.rows(); ++i)
            for (std::size_t j = 0; j < mat.cols(); ++j) {
                if (i + j > 0) w.comma();
                w.value(mat(i, j));
            }
        w.end_array();
    };
    w.begin();
    w.key("n").value(sys.order()).comma();
    w.key("m").value(sys.input_dim()).comma();
    w.key("p").value(sys.output_dim()).comma();
    w.key("A");
    flat(sys.a);
    w.comma().key("B");
    flat(sys.b);
    w.comma().key("C");
    flat(sys.c);
    w.comma().key("D");
    flat(sys.d);
    w.end();
    return w.str();
}

StructureSpec read_structure_json(const std::filesystem::path& path) {
    const nlohmann::json j = load_json(path);
    for (const char* field : {"N", "m", "p", "basis"})
        if (!j.contains(field))
            throw ParseError("structure file missing field '" + std::string(field) + "'");
    StructureSpec spec;
    spec.window = j["N"].get<std::size_t>();
    spec.input_dim = j["m"].get<std::size_t>();
    spec.output_dim = j["p"].get<std::size_t>();
    spec.require_phi_pd = j.value("require_phi_pd", true);
    const std::size_t dim = (spec.window + 1) * (spec.input_dim + spec.output_dim);
    for (const auto& element : j["basis"])
        spec.basis.push_back(matrix_from_flat(element, dim, dim, "basis element"));
    return spec;
}

std::string to_json(const PeReport& rep) {
    JsonWriter w;
    append_pe(w, rep);
    return w.str();
}

std::string to_json(const PreconditionReport& rep) {
    JsonWriter w;
    append_precondition(w, rep);
    return w.str();
}

std::string to_json(const VerificationReport& rep) {
    JsonWriter w;
    append_report(w, rep);
    return w.str();
}

std::string to_json(const SweepResult& result) {
    JsonWriter w;
    w.begin();
    w.key("monotone").value(result.monotone).comma();
    w.key("reports").begin_array();
    for (std::size_t i = 0; i < result.reports.size(); ++i) {
        if (i > 0) w.comma();
        append_report(w, result.reports[i]);
    }
    w.end_array();
    w.end();
    return w.str();
}

std::string to_json(const BisectionResult& result) {
    JsonWriter w;
    w.begin();
    w.key("theta_star").value(result.theta_star).comma();
    w.key("bracket").begin_array().value(result.lo).comma().value(result.hi).end_array().comma();
    w.key("iterations").value(result.iterations);
    w.end();
    return w.str();
}

}  // namespace qsr
