#include "infdl/formula.hpp"

#include <map>
#include <vector>

namespace infdl {

namespace fml {

namespace {
FormulaPtr make(FormulaKind k, std::string name = {}, FormulaPtr l = nullptr,
                FormulaPtr r = nullptr, std::string rel = {}) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->name = std::move(name);
  f->left = std::move(l);
  f->right = std::move(r);
  f->relation = std::move(rel);
  return f;
}
}  // namespace

FormulaPtr top() { return make(FormulaKind::top); }
FormulaPtr bottom() { return make(FormulaKind::bottom); }
FormulaPtr prop(std::string name) { return make(FormulaKind::prop, std::move(name)); }
FormulaPtr neg_prop(std::string name) { return make(FormulaKind::neg_prop, std::move(name)); }
FormulaPtr var(std::string name) { return make(FormulaKind::var, std::move(name)); }
FormulaPtr conj(FormulaPtr a, FormulaPtr b) {
  return make(FormulaKind::conj, {}, std::move(a), std::move(b));
}
FormulaPtr disj(FormulaPtr a, FormulaPtr b) {
  return make(FormulaKind::disj, {}, std::move(a), std::move(b));
}
FormulaPtr ex(FormulaPtr a, std::string relation) {
  return make(FormulaKind::ex, {}, std::move(a), nullptr, std::move(relation));
}
FormulaPtr ax(FormulaPtr a, std::string relation) {
  return make(FormulaKind::ax, {}, std::move(a), nullptr, std::move(relation));
}
FormulaPtr mu(std::string v, FormulaPtr body) {
  return make(FormulaKind::mu, std::move(v), std::move(body));
}
FormulaPtr nu(std::string v, FormulaPtr body) {
  return make(FormulaKind::nu, std::move(v), std::move(body));
}
FormulaPtr unary(FormulaKind k, FormulaPtr a) { return make(k, {}, std::move(a)); }
FormulaPtr binary(FormulaKind k, FormulaPtr a, FormulaPtr b) {
  return make(k, {}, std::move(a), std::move(b));
}

}  // namespace fml

bool is_binder(FormulaKind k) { return k == FormulaKind::mu || k == FormulaKind::nu; }

bool is_ctl_sugar(FormulaKind k) {
  switch (k) {
    case FormulaKind::eu:
    case FormulaKind::au:
    case FormulaKind::ew:
    case FormulaKind::aw:
    case FormulaKind::ef:
    case FormulaKind::af:
    case FormulaKind::eg:
    case FormulaKind::ag:
      return true;
    default:
      return false;
  }
}

std::size_t formula_size(const Formula& f) {
  std::size_t n = 1;
  if (f.left) n += formula_size(*f.left);
  if (f.right) n += formula_size(*f.right);
  return n;
}

std::string to_string(const Formula& f) {
  auto modal = [](const char* op, const Formula& g) {
    std::string s = op;
    if (!g.relation.empty()) s += "[" + g.relation + "]";
    return s + " " + to_string(*g.left);
  };
  auto path = [](const char* q, const char* op, const Formula& g) {
    return std::string(q) + "(" + to_string(*g.left) + " " + op + " " + to_string(*g.right) + ")";
  };
  switch (f.kind) {
    case FormulaKind::top: return "true";
    case FormulaKind::bottom: return "false";
    case FormulaKind::prop: return f.name;
    case FormulaKind::neg_prop: return "!" + f.name;
    case FormulaKind::var: return f.name;
    case FormulaKind::conj: return "(" + to_string(*f.left) + " & " + to_string(*f.right) + ")";
    case FormulaKind::disj: return "(" + to_string(*f.left) + " | " + to_string(*f.right) + ")";
    case FormulaKind::ex: return "(" + modal("EX", f) + ")";
    case FormulaKind::ax: return "(" + modal("AX", f) + ")";
    case FormulaKind::mu: return "(mu " + f.name + ". " + to_string(*f.left) + ")";
    case FormulaKind::nu: return "(nu " + f.name + ". " + to_string(*f.left) + ")";
    case FormulaKind::eu: return path("E", "U", f);
    case FormulaKind::au: return path("A", "U", f);
    case FormulaKind::ew: return path("E", "W", f);
    case FormulaKind::aw: return path("A", "W", f);
    case FormulaKind::ef: return "(EF " + to_string(*f.left) + ")";
    case FormulaKind::af: return "(AF " + to_string(*f.left) + ")";
    case FormulaKind::eg: return "(EG " + to_string(*f.left) + ")";
    case FormulaKind::ag: return "(AG " + to_string(*f.left) + ")";
  }
  return {};
}

namespace {

bool equal_impl(const Formula& a, const Formula& b, std::vector<std::string>& sa,
                std::vector<std::string>& sb, bool alpha) {
  if (a.kind != b.kind || a.relation != b.relation) return false;
  switch (a.kind) {
    case FormulaKind::prop:
    case FormulaKind::neg_prop:
      return a.name == b.name;
    case FormulaKind::var: {
      if (!alpha) return a.name == b.name;
      // Compare de Bruijn positions; free variables compare by name.
      auto find = [](const std::vector<std::string>& s, const std::string& n) -> long {
        for (std::size_t i = s.size(); i > 0; --i)
          if (s[i - 1] == n) return static_cast<long>(s.size() - i);
        return -1;
      };
      long ia = find(sa, a.name), ib = find(sb, b.name);
      if (ia < 0 && ib < 0) return a.name == b.name;
      return ia == ib;
    }
    case FormulaKind::mu:
    case FormulaKind::nu: {
      if (!alpha && a.name != b.name) return false;
      sa.push_back(a.name);
      sb.push_back(b.name);
      bool r = equal_impl(*a.left, *b.left, sa, sb, alpha);
      sa.pop_back();
      sb.pop_back();
      return r;
    }
    default:
      break;
  }
  if (bool(a.left) != bool(b.left) || bool(a.right) != bool(b.right)) return false;
  if (a.left && !equal_impl(*a.left, *b.left, sa, sb, alpha)) return false;
  if (a.right && !equal_impl(*a.right, *b.right, sa, sb, alpha)) return false;
  return true;
}

}  // namespace

bool structurally_equal(const Formula& a, const Formula& b) {
  std::vector<std::string> sa, sb;
  return equal_impl(a, b, sa, sb, false);
}

bool alpha_equivalent(const Formula& a, const Formula& b) {
  std::vector<std::string> sa, sb;
  return equal_impl(a, b, sa, sb, true);
}

}  // namespace infdl
