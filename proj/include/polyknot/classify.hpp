#pragma once

#include <map>
#include <string>
#include <vector>

#include "polyknot/diagram.hpp"
#include "polyknot/homfly.hpp"
#include "polyknot/laurent.hpp"

namespace polyknot {

// Reference polynomials for prime knots through seven crossings that arise in
// small perturbation studies, both chiralities where distinct.
class KnotTable {
public:
    KnotTable() {
        add("Unknot", LaurentPoly2::one());
        add_braid("Trefoil_R", 2, {1, 1, 1});
        add_braid("Trefoil_L", 2, {-1, -1, -1});
        add_braid("FigureEight", 3, {1, -2, 1, -2});
        add_braid("5_1_R", 2, {1, 1, 1, 1, 1});
        add_braid("5_1_L", 2, {-1, -1, -1, -1, -1});
        add_braid("5_2_R", 3, {1, 1, 1, 2, -1, 2});
        add_braid("5_2_L", 3, {-1, -1, -1, -2, 1, -2});
        add_braid("6_1_R", 4, {1, 1, 2, -1, -3, 2, -3});
        add_braid("6_1_L", 4, {-1, -1, -2, 1, 3, -2, 3});
        add_braid("6_2_R", 3, {1, 1, 1, -2, 1, -2});
        add_braid("6_2_L", 3, {-1, -1, -1, 2, -1, 2});
        add_braid("6_3", 3, {1, 1, -2, 1, -2, -2});
    }

    // Label for a polynomial: a table name, a composite "A#B#..." built from
    // prime factors in the table, or "Unknown".
    std::string label(const LaurentPoly2& p) const {
        if (auto it = by_poly_.find(p.to_string()); it != by_poly_.end()) return it->second;
        std::vector<std::string> parts;
        if (factor(p, parts)) {
            std::sort(parts.begin(), parts.end());
            std::string out = parts[0];
            for (size_t i = 1; i < parts.size(); ++i) out += "#" + parts[i];
            return out;
        }
        return "Unknown";
    }

    const LaurentPoly2& polynomial(const std::string& name) const {
        return by_name_.at(name);
    }

    bool contains(const std::string& name) const { return by_name_.count(name) > 0; }

private:
    void add(const std::string& name, const LaurentPoly2& p) {
        by_name_.emplace(name, p);
        by_poly_.emplace(p.to_string(), name);
    }

    void add_braid(const std::string& name, int strands, const std::vector<int>& word) {
        add(name, homfly(braid_closure_knot(strands, word)));
    }

    // Greedy factorization over the prime entries; HOMFLY is multiplicative
    // under connected sum.
    bool factor(const LaurentPoly2& p, std::vector<std::string>& parts) const {
        if (p.is_one()) return !parts.empty();
        for (const auto& [name, q] : by_name_) {
            if (name == "Unknot") continue;
            if (auto rest = p.divide_exact(q)) {
                parts.push_back(name);
                if (factor(*rest, parts)) return true;
                parts.pop_back();
            }
        }
        return false;
    }

    std::map<std::string, LaurentPoly2> by_name_;
    std::map<std::string, std::string> by_poly_;
};

inline const KnotTable& knot_table() {
    static const KnotTable table;
    return table;
}

inline std::string classify(const LaurentPoly2& p) { return knot_table().label(p); }

// Label for a canonical polynomial string as produced by LaurentPoly2::to_string.
inline std::string classify_label(const std::string& canonical) {
    const auto p = LaurentPoly2::parse(canonical);
    return p ? knot_table().label(*p) : "Unknown";
}

// Number of trefoil summands a label encodes (either chirality).
inline int trefoil_summand_count(const std::string& label) {
    int count = 0;
    size_t pos = 0;
    while ((pos = label.find("Trefoil", pos)) != std::string::npos) {
        ++count;
        pos += 7;
    }
    return count;
}

}  // namespace polyknot
