#pragma once

// Serialization: matrices and reports as JSON/CSV, key = value config
// files, and the fixed-precision number formatting shared by every
// machine-readable artifact (17 significant digits, so re-runs are
// byte-identical).

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "meanmat/eig.hpp"
#include "meanmat/matrix.hpp"
#include "meanmat/search.hpp"
#include "meanmat/superop.hpp"

namespace meanmat {

using nlohmann::json;

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string fmt6(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// {"rows": r, "cols": c, "data": [[re, im], ...]} row-major
inline json matrix_to_json(const Matrix& m) {
    json data = json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            data.push_back({m(i, j).real(), m(i, j).imag()});
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline Matrix matrix_from_json(const json& j) {
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    const auto& data = j.at("data");
    if (static_cast<int>(data.size()) != rows * cols)
        throw std::invalid_argument("matrix_from_json: data length mismatch");
    Matrix m(rows, cols);
    int k = 0;
    for (int i = 0; i < rows; ++i)
        for (int j2 = 0; j2 < cols; ++j2, ++k) {
            const auto& e = data[static_cast<std::size_t>(k)];
            if (e.is_number())
                m(i, j2) = e.get<double>();
            else
                m(i, j2) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
        }
    return m;
}

inline std::string complex_to_string(cplx z) {
    if (z.imag() == 0.0) return fmt17(z.real());
    std::string s = fmt17(z.real());
    s += (z.imag() < 0 ? "-" : "+");
    s += fmt17(std::abs(z.imag()));
    s += "j";
    return s;
}

inline void matrix_to_csv(const Matrix& m, std::ostream& os) {
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j) os << ',';
            os << complex_to_string(m(i, j));
        }
        os << '\n';
    }
}

inline json psd_report_to_json(const PsdReport& r) {
    json w = json::array();
    for (const auto& z : r.witness) w.push_back({z.real(), z.imag()});
    return json{{"min_eig", r.min_eig},
                {"is_psd", r.is_psd},
                {"tol_used", r.tol_used},
                {"witness", std::move(w)}};
}

inline json kraus_to_json(const KrausChannel& ch) {
    json ops = json::array();
    for (const auto& k : ch.kraus()) ops.push_back(matrix_to_json(k));
    return json{{"n_in", ch.n_in()}, {"n_out", ch.n_out()}, {"kraus", std::move(ops)}};
}

inline KrausChannel kraus_from_json(const json& j) {
    std::vector<Matrix> ops;
    for (const auto& k : j.at("kraus")) ops.push_back(matrix_from_json(k));
    return KrausChannel(std::move(ops));
}

inline json witness_to_json(const MeanFunction& fn, const Witness& w,
                            SearchCriterion criterion) {
    json lam = json::array();
    for (const double l : w.lambdas) lam.push_back(l);
    json vec = json::array();
    for (const auto& z : w.vector) vec.push_back({z.real(), z.imag()});
    return json{{"fn", fn.str()},
                {"criterion", to_string(criterion)},
                {"criterion_value", w.criterion_value},
                {"lambda", std::move(lam)},
                {"witness_vector", std::move(vec)},
                {"seed_trace", w.seed_trace}};
}

inline void witness_to_csv(const MeanFunction& fn, const Witness& w, SearchCriterion criterion,
                           std::ostream& os) {
    os << "fn,criterion,criterion_value,lambda,seed_trace\n";
    os << fn.str() << ',' << to_string(criterion) << ',' << fmt17(w.criterion_value) << ",\"";
    for (std::size_t i = 0; i < w.lambdas.size(); ++i) {
        if (i) os << ' ';
        os << fmt17(w.lambdas[i]);
    }
    os << "\"," << w.seed_trace << '\n';
}

inline void scan_report_to_csv(const ScanReport& rep, std::ostream& os) {
    os << "family,target,param,n,spectra,seed,worst_min_eig,worst_scale,claimed,violation,"
          "worst_lambda\n";
    for (const auto& row : rep.rows) {
        os << family_name(rep.family) << ','
           << (rep.target == ScanTarget::inverse_mean ? "inverse_mean" : "mean") << ','
           << fmt17(row.param) << ',' << rep.n << ',' << rep.spectra_per_point << ',' << rep.seed
           << ',' << fmt17(row.worst_min_eig) << ',' << fmt17(row.worst_scale) << ','
           << (row.claimed ? 1 : 0) << ',' << (row.violation ? 1 : 0) << ",\"";
        for (std::size_t i = 0; i < row.worst_lambda.size(); ++i) {
            if (i) os << ' ';
            os << fmt17(row.worst_lambda[i]);
        }
        os << "\"\n";
    }
}

inline json scan_report_to_json(const ScanReport& rep) {
    json rows = json::array();
    for (const auto& row : rep.rows) {
        json lam = json::array();
        for (const double l : row.worst_lambda) lam.push_back(l);
        rows.push_back(json{{"param", row.param},
                            {"worst_min_eig", row.worst_min_eig},
                            {"worst_scale", row.worst_scale},
                            {"claimed", row.claimed},
                            {"violation", row.violation},
                            {"worst_lambda", std::move(lam)}});
    }
    return json{{"family", family_name(rep.family)},
                {"target", rep.target == ScanTarget::inverse_mean ? "inverse_mean" : "mean"},
                {"n", rep.n},
                {"spectra_per_point", rep.spectra_per_point},
                {"seed", rep.seed},
                {"violations", rep.violations},
                {"rows", std::move(rows)}};
}

// record of one integral-form cross-check
inline json crosscheck_to_json(const std::string& form, const std::string& fn,
                               const std::string& params, int n, std::uint64_t seed,
                               double discrepancy, double error_estimate) {
    return json{{"form", form},         {"fn", fn},
                {"params", params},     {"n", n},
                {"seed", seed},         {"discrepancy", discrepancy},
                {"error_estimate", error_estimate}};
}

// ---------------------------------------------------------------------------
// flat key = value config files ('#' comments, optional quoted strings)

class Config {
public:
    static Config parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str(), path);
    }

    static Config parse(const std::string& text, const std::string& origin = "<string>") {
        Config c;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto strip = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                if (b == std::string::npos) return std::string();
                const auto e = s.find_last_not_of(" \t\r");
                return s.substr(b, e - b + 1);
            };
            const std::string stripped = strip(line);
            if (stripped.empty()) continue;
            const auto eq = stripped.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                            ": expected key = value");
            std::string key = strip(stripped.substr(0, eq));
            std::string value = strip(stripped.substr(eq + 1));
            if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
                value = value.substr(1, value.size() - 2);
            if (key.empty())
                throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": empty key");
            if (c.kv_.count(key))
                throw std::invalid_argument(origin + ": duplicate key '" + key + "'");
            c.kv_[key] = value;
        }
        return c;
    }

    // unknown keys are rejected before any computation
    void require_known(const std::set<std::string>& allowed) const {
        for (const auto& [k, v] : kv_)
            if (!allowed.count(k))
                throw std::invalid_argument("config: unknown key '" + k + "'");
    }

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string get_string(const std::string& key) const {
        const auto it = kv_.find(key);
        if (it == kv_.end()) throw std::invalid_argument("config: missing key '" + key + "'");
        return it->second;
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        const auto it = kv_.find(key);
        return it == kv_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key) const { return to_double(key, get_string(key)); }
    double get_double(const std::string& key, double fallback) const {
        return has(key) ? get_double(key) : fallback;
    }

    long get_long(const std::string& key) const {
        const double d = get_double(key);
        return static_cast<long>(d);
    }
    long get_long(const std::string& key, long fallback) const {
        return has(key) ? get_long(key) : fallback;
    }

    std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const {
        if (!has(key)) return fallback;
        return static_cast<std::uint64_t>(std::stoull(get_string(key)));
    }

    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    static double to_double(const std::string& key, const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("config: key '" + key + "' is not a number");
        }
        if (used != s.size())
            throw std::invalid_argument("config: key '" + key + "' is not a number");
        return v;
    }

    std::map<std::string, std::string> kv_;
};

}  // namespace meanmat
