#include "achieve/atom.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace achieve {

std::string Atom::str() const {
    if (args_.empty()) return pred_;
    std::ostringstream os;
    os << pred_ << "(";
    for (std::size_t i = 0; i < args_.size(); ++i) {
        if (i) os << ",";
        os << args_[i];
    }
    os << ")";
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Atom& a) { return os << a.str(); }

Interpretation::Interpretation(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    std::sort(atoms_.begin(), atoms_.end());
    atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

bool Interpretation::contains(const Atom& a) const {
    return std::binary_search(atoms_.begin(), atoms_.end(), a);
}

void Interpretation::insert(Atom a) {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
    if (it == atoms_.end() || *it != a) atoms_.insert(it, std::move(a));
}

std::set<Sig> Interpretation::preds() const {
    std::set<Sig> out;
    for (const Atom& a : atoms_) out.insert(a.sig());
    return out;
}

std::string Interpretation::str() const {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (i) os << ", ";
        os << atoms_[i];
    }
    os << "}";
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Interpretation& m) { return os << m.str(); }

} // namespace achieve
