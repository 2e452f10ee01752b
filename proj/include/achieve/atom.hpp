#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "achieve/term.hpp"

namespace achieve {

// Predicate signature: name plus arity. Identity of a predicate.
struct Sig {
    std::string name;
    int arity = 0;

    bool operator==(const Sig& o) const { return arity == o.arity ? name == o.name : false; }
    bool operator<(const Sig& o) const {
        if (int c = name.compare(o.name)) return c < 0;
        return arity < o.arity;
    }
    std::string str() const { return name + "/" + std::to_string(arity); }
};

class Atom {
public:
    Atom() = default;
    Atom(std::string pred, std::vector<Term> args)
        : pred_(std::move(pred)), args_(std::move(args)) {}

    const std::string& pred() const { return pred_; }
    const std::vector<Term>& args() const { return args_; }
    int arity() const { return static_cast<int>(args_.size()); }
    Sig sig() const { return Sig{pred_, arity()}; }

    bool precomputed() const {
        for (const Term& a : args_)
            if (!a.precomputed()) return false;
        return true;
    }
    bool hasVariables() const {
        for (const Term& a : args_)
            if (a.hasVariables()) return true;
        return false;
    }
    void collectVariables(std::set<std::string>& out) const {
        for (const Term& a : args_) a.collectVariables(out);
    }

    int compare(const Atom& o) const {
        if (int c = pred_.compare(o.pred_)) return c;
        if (args_.size() != o.args_.size()) return args_.size() < o.args_.size() ? -1 : 1;
        for (std::size_t i = 0; i < args_.size(); ++i)
            if (int c = args_[i].compare(o.args_[i])) return c;
        return 0;
    }
    bool operator==(const Atom& o) const { return compare(o) == 0; }
    bool operator!=(const Atom& o) const { return compare(o) != 0; }
    bool operator<(const Atom& o) const { return compare(o) < 0; }

    std::string str() const;

private:
    std::string pred_;
    std::vector<Term> args_;
};

std::ostream& operator<<(std::ostream& os, const Atom& a);

// A set of precomputed atoms in canonical order.
class Interpretation {
public:
    Interpretation() = default;
    explicit Interpretation(std::vector<Atom> atoms);

    bool contains(const Atom& a) const;
    void insert(Atom a);
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }

    const std::vector<Atom>& atoms() const { return atoms_; }
    auto begin() const { return atoms_.begin(); }
    auto end() const { return atoms_.end(); }

    std::set<Sig> preds() const;

    bool operator==(const Interpretation& o) const { return atoms_ == o.atoms_; }
    bool operator!=(const Interpretation& o) const { return atoms_ != o.atoms_; }
    bool operator<(const Interpretation& o) const { return atoms_ < o.atoms_; }

    std::string str() const;

private:
    std::vector<Atom> atoms_;
};

std::ostream& operator<<(std::ostream& os, const Interpretation& m);

} // namespace achieve
