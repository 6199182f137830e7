#include "dps/expr.hpp"

#include <utility>

namespace dps {

Expr Expr::constant(bool v)
{
    Expr e;
    e.kind = Kind::Const;
    e.value = v;
    return e;
}

Expr Expr::atom(std::string text)
{
    Expr e;
    e.kind = Kind::Atom;
    e.text = std::move(text);
    return e;
}

Expr Expr::negate(Expr inner)
{
    Expr e;
    e.kind = Kind::Not;
    e.kids.push_back(std::move(inner));
    return e;
}

Expr Expr::conj(std::vector<Expr> es)
{
    Expr e;
    e.kind = Kind::And;
    e.kids = std::move(es);
    return e;
}

Expr Expr::disj(std::vector<Expr> es)
{
    Expr e;
    e.kind = Kind::Or;
    e.kids = std::move(es);
    return e;
}

bool Expr::eval(const std::function<bool(const Expr&)>& atom_value) const
{
    switch (kind) {
    case Kind::Const:
        return value;
    case Kind::Atom:
        return atom_value(*this);
    case Kind::Not:
        return !kids.front().eval(atom_value);
    case Kind::And:
        for (const auto& k : kids)
            if (!k.eval(atom_value))
                return false;
        return true;
    case Kind::Or:
        for (const auto& k : kids)
            if (k.eval(atom_value))
                return true;
        return false;
    }
    return false;
}

void Expr::for_each_atom(const std::function<void(Expr&)>& fn)
{
    if (kind == Kind::Atom) {
        fn(*this);
        return;
    }
    for (auto& k : kids)
        k.for_each_atom(fn);
}

void Expr::for_each_atom(const std::function<void(const Expr&)>& fn) const
{
    if (kind == Kind::Atom) {
        fn(*this);
        return;
    }
    for (const auto& k : kids)
        k.for_each_atom(fn);
}

} // namespace dps
