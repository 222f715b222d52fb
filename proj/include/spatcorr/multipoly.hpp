#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spatcorr {

using Exponents = std::vector<unsigned>;

/// Graded lexicographic order: lower total degree first; within one degree
/// the lexicographically larger exponent tuple comes first (x^2, xy, y^2).
struct GradedLex {
    bool operator()(const Exponents& a, const Exponents& b) const;
};

/// Sparse multivariate polynomial with real coefficients. No stored
/// coefficient is exactly zero; every exponent tuple has one entry per
/// variable.
class MultiPoly {
public:
    using TermMap = std::map<Exponents, double, GradedLex>;

    MultiPoly() = default;
    explicit MultiPoly(std::vector<std::string> variables);

    static MultiPoly constant(std::vector<std::string> variables, double c);
    static MultiPoly variable(std::vector<std::string> variables, const std::string& name);

    const std::vector<std::string>& variables() const noexcept { return vars_; }
    const TermMap& terms() const noexcept { return terms_; }
    std::size_t term_count() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    std::optional<std::size_t> index_of(const std::string& name) const;

    /// Adds `coef` to the coefficient of `exps`; drops the term if it cancels.
    void add_term(const Exponents& exps, double coef);
    double coefficient(const Exponents& exps) const;

    unsigned degree_in(const std::string& name) const;
    unsigned total_degree() const;
    double max_abs_coefficient() const;
    double sum_abs_coefficients() const;
    /// Largest term in graded lexicographic order.
    std::pair<Exponents, double> leading_term() const;

    double evaluate(std::span<const double> point) const;
    double evaluate(const std::map<std::string, double>& point) const;

    /// Same polynomial over another variable list. Variables absent from
    /// `variables` must not occur in any term.
    MultiPoly with_variables(const std::vector<std::string>& variables) const;
    /// Drops every variable that occurs in no term.
    MultiPoly without_unused_variables() const;

    /// Simultaneous substitution: variable k is replaced by replacements[k].
    /// All replacements must share one variable list, which the result uses.
    MultiPoly compose(const std::vector<MultiPoly>& replacements) const;
    MultiPoly substitute(const std::string& name, const MultiPoly& replacement) const;

    /// Coefficients of powers of `name`: result[k] multiplies name^k. Each
    /// coefficient keeps this polynomial's variable list.
    std::vector<MultiPoly> coefficients_in(const std::string& name) const;

    /// Removes terms with |c| < rel_tol * max|c|.
    MultiPoly pruned(double rel_tol) const;

    MultiPoly& operator+=(const MultiPoly& other);
    MultiPoly& operator-=(const MultiPoly& other);
    MultiPoly& operator*=(double s);

    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator*(MultiPoly a, double s) { return a *= s; }
    friend MultiPoly operator*(double s, MultiPoly a) { return a *= s; }
    friend MultiPoly operator-(MultiPoly a) { return a *= -1.0; }
    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        return a.vars_ == b.vars_ && a.terms_ == b.terms_;
    }

    MultiPoly pow(unsigned k) const;

    /// Canonical text form, terms in graded lexicographic order, coefficients
    /// with 17 significant digits.
    std::string to_string() const;

private:
    std::vector<std::string> vars_;
    TermMap terms_;
};

/// Union of two variable lists: `a` in order, then the new names of `b`.
std::vector<std::string> merge_variables(const std::vector<std::string>& a,
                                         const std::vector<std::string>& b);

}  // namespace spatcorr
