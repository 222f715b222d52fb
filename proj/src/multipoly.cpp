#include "spatcorr/multipoly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "spatcorr/error.hpp"

namespace spatcorr {

namespace {

constexpr const char* kWhere = "surface-fit/MultiPoly";

unsigned degree_of(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0u); }

double ipow(double base, unsigned k) {
    double out = 1.0;
    while (k) {
        if (k & 1u) out *= base;
        base *= base;
        k >>= 1u;
    }
    return out;
}

}  // namespace

bool GradedLex::operator()(const Exponents& a, const Exponents& b) const {
    const auto da = degree_of(a), db = degree_of(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

MultiPoly::MultiPoly(std::vector<std::string> variables) : vars_(std::move(variables)) {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (vars_[i] == vars_[j])
                throw Error(ErrorKind::InvalidArgument, kWhere, "duplicate variable '" + vars_[i] + "'");
}

MultiPoly MultiPoly::constant(std::vector<std::string> variables, double c) {
    MultiPoly p(std::move(variables));
    p.add_term(Exponents(p.vars_.size(), 0u), c);
    return p;
}

MultiPoly MultiPoly::variable(std::vector<std::string> variables, const std::string& name) {
    MultiPoly p(std::move(variables));
    const auto idx = p.index_of(name);
    if (!idx) throw Error(ErrorKind::InvalidArgument, kWhere, "unknown variable '" + name + "'");
    Exponents e(p.vars_.size(), 0u);
    e[*idx] = 1;
    p.add_term(e, 1.0);
    return p;
}

std::optional<std::size_t> MultiPoly::index_of(const std::string& name) const {
    auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it == vars_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - vars_.begin());
}

void MultiPoly::add_term(const Exponents& exps, double coef) {
    if (exps.size() != vars_.size())
        throw Error(ErrorKind::Shape, kWhere, "exponent tuple arity does not match variables");
    if (coef == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(exps, coef);
    if (!inserted) {
        it->second += coef;
        if (it->second == 0.0) terms_.erase(it);
    }
}

double MultiPoly::coefficient(const Exponents& exps) const {
    auto it = terms_.find(exps);
    return it == terms_.end() ? 0.0 : it->second;
}

unsigned MultiPoly::degree_in(const std::string& name) const {
    const auto idx = index_of(name);
    if (!idx) return 0;
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[*idx]);
    return d;
}

unsigned MultiPoly::total_degree() const {
    return terms_.empty() ? 0u : degree_of(terms_.rbegin()->first);
}

double MultiPoly::max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

double MultiPoly::sum_abs_coefficients() const {
    double s = 0.0;
    for (const auto& [e, c] : terms_) s += std::abs(c);
    return s;
}

std::pair<Exponents, double> MultiPoly::leading_term() const {
    if (terms_.empty()) return {Exponents(vars_.size(), 0u), 0.0};
    // Highest degree group sits at the end; its lexicographically largest
    // member is that group's first element.
    const auto top = degree_of(terms_.rbegin()->first);
    auto it = std::find_if(terms_.begin(), terms_.end(),
                           [&](const auto& t) { return degree_of(t.first) == top; });
    return *it;
}

double MultiPoly::evaluate(std::span<const double> point) const {
    if (point.size() != vars_.size())
        throw Error(ErrorKind::Shape, kWhere, "evaluation point arity does not match variables");
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
        double m = c;
        for (std::size_t k = 0; k < e.size(); ++k)
            if (e[k]) m *= ipow(point[k], e[k]);
        acc += m;
    }
    return acc;
}

double MultiPoly::evaluate(const std::map<std::string, double>& point) const {
    std::vector<double> pt;
    pt.reserve(vars_.size());
    for (const auto& v : vars_) {
        auto it = point.find(v);
        if (it == point.end())
            throw Error(ErrorKind::Shape, kWhere, "no value supplied for variable '" + v + "'");
        pt.push_back(it->second);
    }
    return evaluate(pt);
}

MultiPoly MultiPoly::with_variables(const std::vector<std::string>& variables) const {
    MultiPoly out(variables);
    std::vector<std::optional<std::size_t>> target(vars_.size());
    for (std::size_t k = 0; k < vars_.size(); ++k) target[k] = out.index_of(vars_[k]);
    for (const auto& [e, c] : terms_) {
        Exponents ne(variables.size(), 0u);
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (!e[k]) continue;
            if (!target[k])
                throw Error(ErrorKind::InvalidArgument, kWhere,
                            "variable '" + vars_[k] + "' occurs but is not in the target list");
            ne[*target[k]] = e[k];
        }
        out.add_term(ne, c);
    }
    return out;
}

MultiPoly MultiPoly::without_unused_variables() const {
    std::vector<std::string> used;
    for (std::size_t k = 0; k < vars_.size(); ++k)
        if (std::any_of(terms_.begin(), terms_.end(), [&](const auto& t) { return t.first[k] > 0; }))
            used.push_back(vars_[k]);
    return with_variables(used);
}

MultiPoly MultiPoly::compose(const std::vector<MultiPoly>& replacements) const {
    if (replacements.size() != vars_.size())
        throw Error(ErrorKind::Shape, kWhere, "compose needs one replacement per variable");
    std::vector<std::string> out_vars = replacements.empty() ? std::vector<std::string>{}
                                                             : replacements.front().variables();
    for (const auto& r : replacements)
        if (r.variables() != out_vars)
            throw Error(ErrorKind::Shape, kWhere, "replacements must share one variable list");

    // powers[k][p] = replacements[k]^p, filled lazily
    std::vector<std::vector<MultiPoly>> powers(vars_.size());
    auto power = [&](std::size_t k, unsigned p) -> const MultiPoly& {
        auto& cache = powers[k];
        if (cache.empty()) cache.push_back(MultiPoly::constant(out_vars, 1.0));
        while (cache.size() <= p) cache.push_back(cache.back() * replacements[k]);
        return cache[p];
    };

    MultiPoly out(out_vars);
    for (const auto& [e, c] : terms_) {
        MultiPoly term = MultiPoly::constant(out_vars, c);
        for (std::size_t k = 0; k < e.size(); ++k)
            if (e[k]) term = term * power(k, e[k]);
        out += term;
    }
    return out;
}

MultiPoly MultiPoly::substitute(const std::string& name, const MultiPoly& replacement) const {
    const auto idx = index_of(name);
    if (!idx) return *this;
    const auto merged = merge_variables(vars_, replacement.variables());
    std::vector<MultiPoly> reps;
    reps.reserve(vars_.size());
    for (std::size_t k = 0; k < vars_.size(); ++k)
        reps.push_back(k == *idx ? replacement.with_variables(merged) : MultiPoly::variable(merged, vars_[k]));
    return compose(reps);
}

std::vector<MultiPoly> MultiPoly::coefficients_in(const std::string& name) const {
    const auto idx = index_of(name);
    if (!idx) return {*this};
    std::vector<MultiPoly> out(degree_in(name) + 1, MultiPoly(vars_));
    for (const auto& [e, c] : terms_) {
        Exponents ne = e;
        ne[*idx] = 0;
        out[e[*idx]].add_term(ne, c);
    }
    return out;
}

MultiPoly MultiPoly::pruned(double rel_tol) const {
    const double cut = rel_tol * max_abs_coefficient();
    MultiPoly out(vars_);
    for (const auto& [e, c] : terms_)
        if (std::abs(c) >= cut) out.terms_.emplace(e, c);
    return out;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
    if (other.vars_ != vars_) {
        const auto merged = merge_variables(vars_, other.vars_);
        *this = with_variables(merged);
        const auto rhs = other.with_variables(merged);
        for (const auto& [e, c] : rhs.terms_) add_term(e, c);
        return *this;
    }
    for (const auto& [e, c] : other.terms_) add_term(e, c);
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) {
    return *this += other * -1.0;
}

MultiPoly& MultiPoly::operator*=(double s) {
    if (s == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second *= s;
        it = it->second == 0.0 ? terms_.erase(it) : std::next(it);
    }
    return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    if (a.vars_ != b.vars_) {
        const auto merged = merge_variables(a.vars_, b.vars_);
        return a.with_variables(merged) * b.with_variables(merged);
    }
    MultiPoly out(a.vars_);
    Exponents e(a.vars_.size());
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
            out.add_term(e, ca * cb);
        }
    return out;
}

MultiPoly MultiPoly::pow(unsigned k) const {
    MultiPoly out = MultiPoly::constant(vars_, 1.0);
    for (unsigned i = 0; i < k; ++i) out = out * *this;
    return out;
}

std::string MultiPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : terms_) {
        if (!out.empty()) out += c < 0 ? " - " : " + ";
        else if (c < 0) out += "-";
        const bool unit = std::abs(c) == 1.0 && std::any_of(e.begin(), e.end(), [](unsigned k) { return k > 0; });
        bool first = true;
        if (!unit) out += fmt::format("{:.17g}", std::abs(c)), first = false;
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (!e[k]) continue;
            out += (first ? "" : "*") + vars_[k];
            first = false;
            if (e[k] > 1) out += "^" + std::to_string(e[k]);
        }
    }
    return out;
}

std::vector<std::string> merge_variables(const std::vector<std::string>& a,
                                         const std::vector<std::string>& b) {
    auto out = a;
    for (const auto& v : b)
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    return out;
}

}  // namespace spatcorr
