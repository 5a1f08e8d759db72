#pragma once

// One experiment row per (p, n, X) cell, with the CSV and JSON codecs used
// by the sweep and report commands.
//
// CSV schema (fixed, integer columns unquoted, witness ;-joined ascending):
//   p,n,X,kind,value,exact,witness,construction_size,envelope,nodes,elapsed_millis,seed,status

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "smallprod/sets.hpp"

namespace smallprod {

struct RunRecord {
    int64_t p = 0;
    int n = 0; // 0 for the ratio family
    int64_t X = 0;
    char kind = 'S';
    int64_t value = 0;
    bool exact = false;
    std::string witness; // ;-joined ascending residues
    int64_t construction_size = 0;
    double envelope = 0.0;
    int64_t nodes = 0;
    int64_t elapsed_millis = 0;
    uint64_t seed = 0;
    std::string status = "ok";

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

inline std::string csv_header() {
    return "p,n,X,kind,value,exact,witness,construction_size,envelope,nodes,"
           "elapsed_millis,seed,status";
}

namespace detail {

inline std::string format_envelope(double v) {
    // max_digits10 keeps text -> double -> text round trips exact
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

inline std::string to_csv(const RunRecord& r) {
    std::ostringstream out;
    out << r.p << ',' << r.n << ',' << r.X << ',' << r.kind << ',' << r.value << ','
        << (r.exact ? 1 : 0) << ',' << r.witness << ',' << r.construction_size << ','
        << detail::format_envelope(r.envelope) << ',' << r.nodes << ','
        << r.elapsed_millis << ',' << r.seed << ',' << r.status;
    return out.str();
}

inline RunRecord from_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    if (fields.size() != 13)
        throw std::invalid_argument("malformed record row: " + line);
    RunRecord r;
    r.p = std::stoll(fields[0]);
    r.n = std::stoi(fields[1]);
    r.X = std::stoll(fields[2]);
    if (fields[3].size() != 1 || (fields[3][0] != 'S' && fields[3][0] != 'R'))
        throw std::invalid_argument("record kind must be S or R");
    r.kind = fields[3][0];
    r.value = std::stoll(fields[4]);
    r.exact = fields[5] == "1";
    r.witness = fields[6];
    r.construction_size = std::stoll(fields[7]);
    r.envelope = std::stod(fields[8]);
    r.nodes = std::stoll(fields[9]);
    r.elapsed_millis = std::stoll(fields[10]);
    r.seed = std::stoull(fields[11]);
    r.status = fields[12];
    return r;
}

inline nlohmann::json to_json(const RunRecord& r) {
    return nlohmann::json{{"p", r.p},
                          {"n", r.n},
                          {"X", r.X},
                          {"kind", std::string(1, r.kind)},
                          {"value", r.value},
                          {"exact", r.exact},
                          {"witness", r.witness},
                          {"construction_size", r.construction_size},
                          {"envelope", r.envelope},
                          {"nodes", r.nodes},
                          {"elapsed_millis", r.elapsed_millis},
                          {"seed", r.seed},
                          {"status", r.status}};
}

inline RunRecord from_json(const nlohmann::json& j) {
    RunRecord r;
    r.p = j.at("p").get<int64_t>();
    r.n = j.at("n").get<int>();
    r.X = j.at("X").get<int64_t>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind != "S" && kind != "R")
        throw std::invalid_argument("record kind must be S or R");
    r.kind = kind[0];
    r.value = j.at("value").get<int64_t>();
    r.exact = j.at("exact").get<bool>();
    r.witness = j.at("witness").get<std::string>();
    r.construction_size = j.at("construction_size").get<int64_t>();
    r.envelope = j.at("envelope").get<double>();
    r.nodes = j.at("nodes").get<int64_t>();
    r.elapsed_millis = j.at("elapsed_millis").get<int64_t>();
    r.seed = j.at("seed").get<uint64_t>();
    r.status = j.at("status").get<std::string>();
    return r;
}

inline std::string join_witness(const std::vector<int64_t>& elems) {
    std::string out;
    for (size_t i = 0; i < elems.size(); ++i) {
        if (i) out.push_back(';');
        out += std::to_string(elems[i]);
    }
    return out;
}

inline std::vector<int64_t> split_witness(const std::string& witness) {
    std::vector<int64_t> out;
    std::string cur;
    for (char c : witness) {
        if (c == ';') {
            out.push_back(std::stoll(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::stoll(cur));
    return out;
}

/// Re-runs the matching membership predicate on the stored witness.
inline bool revalidate_witness(const RunRecord& r) {
    PrimeModulus mod(r.p);
    const CandidateSet A(mod, split_witness(r.witness));
    if (A.size() != r.value) return false;
    if (r.kind == 'S') return satisfies_ratio_property(A, RatioInstance(mod, r.X));
    return satisfies_product_property(A, ProductInstance(mod, r.n, r.X));
}

inline void write_csv(std::ostream& out, const std::vector<RunRecord>& records) {
    out << csv_header() << '\n';
    for (const auto& r : records) out << to_csv(r) << '\n';
}

inline std::vector<RunRecord> read_csv(std::istream& in) {
    std::vector<RunRecord> records;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first && line == csv_header()) {
            first = false;
            continue;
        }
        first = false;
        records.push_back(from_csv(line));
    }
    return records;
}

} // namespace smallprod
