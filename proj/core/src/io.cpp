#include <adclin/io.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace adclin {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
            throw std::runtime_error(std::string("parse error in ") + what + ": '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

double parse_one_double(const std::string& text, const char* what) {
    const std::vector<double> v = parse_double_list(text, what);
    if (v.size() != 1)
        throw std::runtime_error(std::string("expected one number for ") + what);
    return v.front();
}

const std::string& require(const std::map<std::string, std::string>& kv, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::runtime_error("missing field '" + key + "'");
    return it->second;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += format_double(v[i]);
    }
    return out;
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write file: " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
}

void write_signal_csv(const std::string& path, const Signal& s, const std::string& comment) {
    std::string out;
    if (!comment.empty()) out += "# " + comment + "\n";
    out += "n,value\n";
    for (std::size_t i = 0; i < s.samples.size(); ++i)
        out += std::to_string(i + 1) + "," + format_double(s.samples[i]) + "\n";
    write_text_file(path, out);
}

Signal read_signal_csv(const std::string& path) {
    std::istringstream in(read_text_file(path));
    Signal s;
    std::string line;
    bool header_seen = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != "n,value")
                throw std::runtime_error(path + ": expected header 'n,value'");
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error(path + ": malformed row at line " + std::to_string(lineno));
        s.samples.push_back(parse_one_double(line.substr(comma + 1), "signal value"));
    }
    if (!header_seen) throw std::runtime_error(path + ": missing 'n,value' header");
    return s;
}

void write_spectrum_csv(const std::string& path, const Spectrum& spec,
                        const std::string& comment) {
    std::string out;
    if (!comment.empty()) out += "# " + comment + "\n";
    out += "omega_over_pi,power_db\n";
    if (!spec.empty) {
        for (std::size_t k = 0; k < spec.omega.size(); ++k)
            out += format_double(spec.omega[k] / std::numbers::pi) + "," +
                   format_double(spec.power_db[k]) + "\n";
    }
    write_text_file(path, out);
}

void write_table_csv(const std::string& path, const std::string& comment,
                     const std::string& header, const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    if (!comment.empty()) out += "# " + comment + "\n";
    out += header + "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    write_text_file(path, out);
}

void save_linearizer(const std::string& path, const LinearizerVariant& lin) {
    std::string out = "# adclin linearizer\n";
    if (const auto* b = std::get_if<BranchLinearizer>(&lin)) {
        out += "kind = branch\n";
        out += std::string("activation = ") +
               (b->activation == ActivationKind::OneBit
                    ? "onebit"
                    : b->activation == ActivationKind::ReLU ? "relu" : "modulus") +
               "\n";
        out += "N = " + std::to_string(b->N()) + "\n";
        out += "c0 = " + format_double(b->c0) + "\n";
        out += "c1 = " + format_double(b->c1) + "\n";
        out += "biases = " + join_doubles(b->biases) + "\n";
        out += "weights = " + join_doubles(b->weights) + "\n";
    } else if (const auto* t = std::get_if<LutLinearizer>(&lin)) {
        out += "kind = lut\n";
        out += "N = " + std::to_string(t->N()) + "\n";
        out += "c1 = " + format_double(t->c1) + "\n";
        out += "lut_table = " + join_doubles(t->table) + "\n";
    } else {
        const auto& h = std::get<HammersteinLinearizer>(lin);
        out += "kind = hammerstein\n";
        out += "K = " + std::to_string(h.K()) + "\n";
        out += "d = " + join_doubles(h.d) + "\n";
    }
    write_text_file(path, out);
}

LinearizerVariant load_linearizer(const std::string& path) {
    const std::map<std::string, std::string> kv = parse_kv_file(path);
    const std::string& kind = require(kv, "kind");
    if (kind == "branch") {
        BranchLinearizer b;
        const std::string& act = require(kv, "activation");
        if (act == "onebit")
            b.activation = ActivationKind::OneBit;
        else if (act == "relu")
            b.activation = ActivationKind::ReLU;
        else if (act == "modulus")
            b.activation = ActivationKind::Modulus;
        else
            throw std::runtime_error(path + ": unknown activation '" + act + "'");
        const int N = std::stoi(require(kv, "N"));
        b.c0 = parse_one_double(require(kv, "c0"), "c0");
        b.c1 = parse_one_double(require(kv, "c1"), "c1");
        b.biases = parse_double_list(require(kv, "biases"), "biases");
        b.weights = parse_double_list(require(kv, "weights"), "weights");
        if (b.N() != N || static_cast<int>(b.weights.size()) != N)
            throw std::runtime_error(path + ": bias/weight count does not match N");
        return b;
    }
    if (kind == "lut") {
        LutLinearizer t;
        const int N = std::stoi(require(kv, "N"));
        t.c1 = parse_one_double(require(kv, "c1"), "c1");
        t.table = parse_double_list(require(kv, "lut_table"), "lut_table");
        if (t.N() != N) throw std::runtime_error(path + ": lut_table size does not match N+1");
        return t;
    }
    if (kind == "hammerstein") {
        HammersteinLinearizer h;
        const int K = std::stoi(require(kv, "K"));
        h.d = parse_double_list(require(kv, "d"), "d");
        if (h.K() != K) throw std::runtime_error(path + ": coefficient count does not match K+1");
        return h;
    }
    throw std::runtime_error(path + ": unknown linearizer kind '" + kind + "'");
}

std::map<std::string, std::string> parse_kv_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("key-value parse error at line " + std::to_string(lineno) +
                                     ": missing '='");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw std::runtime_error("key-value parse error at line " + std::to_string(lineno) +
                                     ": empty key");
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
    return parse_kv_text(read_text_file(path));
}

} // namespace adclin
