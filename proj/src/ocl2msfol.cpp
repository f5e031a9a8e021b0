#include "oclsql/ocl2msfol.hpp"

#include <algorithm>

namespace oclsql::o2f {

using msfol::Binder;
using msfol::Declaration;
using msfol::Sort;
using msfol::TermPtr;
using msfol::Theory;
namespace mk = msfol::mk;
using ocl::Expr;
using ocl::ExprPtr;

msfol::Sort attr_sort(const Attribute& attr) {
  switch (attr.type.kind) {
    case AttrType::Kind::Integer: return Sort::Int;
    case AttrType::Kind::String: return Sort::String;
    case AttrType::Kind::Class: return Sort::Classifier;
  }
  return Sort::Int;
}

std::string attr_symbol(const DataModel& dm, const Attribute& attr) {
  for (const auto& other : dm.attributes) {
    if (other.name == attr.name && attr_sort(other) != attr_sort(attr))
      return msfol::sanitize_symbol(attr.owner + "." + attr.name);
  }
  return msfol::sanitize_symbol(attr.name);
}

TermPtr null_of(Sort s) {
  switch (s) {
    case Sort::Int: return mk::sym("nullInt", Sort::Int);
    case Sort::String: return mk::sym("nullString", Sort::String);
    case Sort::Classifier: return mk::sym("nullClassifier", Sort::Classifier);
    default: fail("o2f", "no null constant for this sort");
  }
}

TermPtr inval_of(Sort s) {
  switch (s) {
    case Sort::Int: return mk::sym("invalInt", Sort::Int);
    case Sort::String: return mk::sym("invalString", Sort::String);
    case Sort::Classifier: return mk::sym("invalClassifier", Sort::Classifier);
    default: fail("o2f", "no invalid constant for this sort");
  }
}

namespace {

TermPtr class_pred(const std::string& cls, TermPtr x) {
  return mk::app(msfol::sanitize_symbol(cls), {Sort::Classifier}, Sort::Bool, {std::move(x)});
}

TermPtr assoc_pred(const std::string& as, TermPtr l, TermPtr r) {
  return mk::app(msfol::sanitize_symbol(as), {Sort::Classifier, Sort::Classifier}, Sort::Bool,
                 {std::move(l), std::move(r)});
}

}  // namespace

Theory o2f_data(const DataModel& dm) {
  Theory t;
  t.declare({"nullInt", {}, Sort::Int});
  t.declare({"invalInt", {}, Sort::Int});
  t.declare({"nullString", {}, Sort::String});
  t.declare({"invalString", {}, Sort::String});
  t.declare({"nullClassifier", {}, Sort::Classifier});
  t.declare({"invalClassifier", {}, Sort::Classifier});
  t.add_axiom(mk::distinct({null_of(Sort::Int), inval_of(Sort::Int)}));
  t.add_axiom(mk::distinct({null_of(Sort::String), inval_of(Sort::String)}));
  t.add_axiom(mk::distinct({null_of(Sort::Classifier), inval_of(Sort::Classifier)}));

  for (const auto& cls : dm.classes) {
    t.declare({msfol::sanitize_symbol(cls), {Sort::Classifier}, Sort::Bool});
    t.add_axiom(mk::not_(class_pred(cls, null_of(Sort::Classifier))));
    t.add_axiom(mk::not_(class_pred(cls, inval_of(Sort::Classifier))));
  }
  // Classes are pairwise disjoint.
  for (size_t i = 0; i < dm.classes.size(); ++i) {
    for (size_t j = i + 1; j < dm.classes.size(); ++j) {
      TermPtr c = mk::bound("c", Sort::Classifier);
      t.add_axiom(mk::forall(
          {{"c", Sort::Classifier}},
          mk::not_(mk::and_({class_pred(dm.classes[i], c), class_pred(dm.classes[j], c)}))));
    }
  }

  for (const auto& attr : dm.attributes) {
    const Sort sort = attr_sort(attr);
    const std::string symbol = attr_symbol(dm, attr);
    t.declare({symbol, {Sort::Classifier}, sort});
    TermPtr c = mk::bound("c", Sort::Classifier);
    TermPtr value = mk::app(symbol, {Sort::Classifier}, sort, {c});
    // Stored attribute values are never invalid, and class-typed values are
    // objects of the target class or null.
    t.add_axiom(mk::forall({{"c", Sort::Classifier}},
                           mk::implies(class_pred(attr.owner, c),
                                       mk::not_(mk::eq(value, inval_of(sort))))));
    if (attr.type.kind == AttrType::Kind::Class) {
      t.add_axiom(mk::forall(
          {{"c", Sort::Classifier}},
          mk::implies(class_pred(attr.owner, c),
                      mk::or_({class_pred(attr.type.class_name, value),
                               mk::eq(value, null_of(Sort::Classifier))}))));
    }
  }

  for (const auto& as : dm.associations) {
    t.declare({msfol::sanitize_symbol(as.name), {Sort::Classifier, Sort::Classifier}, Sort::Bool});
    TermPtr c = mk::bound("c", Sort::Classifier);
    TermPtr d = mk::bound("d", Sort::Classifier);
    t.add_axiom(mk::forall({{"c", Sort::Classifier}, {"d", Sort::Classifier}},
                           mk::implies(assoc_pred(as.name, c, d),
                                       mk::and_({class_pred(as.left_class, c),
                                                 class_pred(as.right_class, d)}))));
  }
  return t;
}

FreeDecls declare_frees(const std::vector<TypedVar>& vars, const DataModel& dm) {
  FreeDecls out;
  for (const auto& v : vars) {
    const std::string symbol = msfol::sanitize_symbol(v.name);
    VarEntry entry;
    if (v.type == "Integer") {
      out.theory.declare({symbol, {}, Sort::Int});
      entry.kind = VarEntry::Kind::Scalar;
      entry.term = mk::sym(symbol, Sort::Int);
      entry.sort = Sort::Int;
    } else if (v.type == "String") {
      out.theory.declare({symbol, {}, Sort::String});
      entry.kind = VarEntry::Kind::Scalar;
      entry.term = mk::sym(symbol, Sort::String);
      entry.sort = Sort::String;
    } else if (v.type == "Boolean") {
      entry.kind = VarEntry::Kind::Boolean;
      const std::string bt = symbol + "!t", bn = symbol + "!n", bi = symbol + "!i";
      out.theory.declare({bt, {}, Sort::Bool});
      out.theory.declare({bn, {}, Sort::Bool});
      out.theory.declare({bi, {}, Sort::Bool});
      entry.is_true = mk::sym(bt, Sort::Bool);
      entry.is_null = mk::sym(bn, Sort::Bool);
      entry.is_inval = mk::sym(bi, Sort::Bool);
      out.theory.add_axiom(
          mk::and_({mk::not_(mk::and_({entry.is_true, entry.is_null})),
                    mk::not_(mk::and_({entry.is_true, entry.is_inval})),
                    mk::not_(mk::and_({entry.is_null, entry.is_inval}))}),
          "four-valued encoding of " + v.name);
    } else if (dm.has_class(v.type)) {
      out.theory.declare({symbol, {}, Sort::Classifier});
      entry.kind = VarEntry::Kind::Scalar;
      entry.term = mk::sym(symbol, Sort::Classifier);
      entry.sort = Sort::Classifier;
      // Object-typed free variables denote objects of their declared class.
      out.theory.add_axiom(class_pred(v.type, entry.term), v.name + " is a " + v.type);
    } else {
      fail("frees", "unknown type '" + v.type + "' for variable '" + v.name + "'");
    }
    out.env.emplace(v.name, std::move(entry));
  }
  return out;
}

Translator::Translator(const DataModel& dm, const FreeDecls& frees) : dm_(dm) {
  globals_.vars = frees.env;
}

BoolInfo Translator::translate(const ocl::ExprPtr& e) { return bool_info(e, globals_); }

TermPtr Translator::apply_set(const SetOcc& s, TermPtr elem) {
  std::vector<Sort> sig = s.param_sorts;
  sig.push_back(s.elem);
  std::vector<TermPtr> args = s.params;
  args.push_back(std::move(elem));
  return mk::app(s.pred, sig, Sort::Bool, args);
}

std::string Translator::fresh_binder(const std::string& base, const Env& env) const {
  if (!env.vars.count(base)) return base;
  for (int i = 0;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!env.vars.count(candidate)) return candidate;
  }
}

void Translator::literal_axiom(const TermPtr& lit, Sort sort, const std::string& text) {
  if (!literal_done_.insert(text).second) return;
  defs_.add_axiom(mk::and_({mk::ne(lit, null_of(sort)), mk::ne(lit, inval_of(sort))}),
                  "literal " + text);
}

namespace {

Sort sort_of_type(const ocl::Type& t) {
  switch (t.kind) {
    case ocl::Type::Kind::Int: return Sort::Int;
    case ocl::Type::Kind::String: return Sort::String;
    case ocl::Type::Kind::Class: return Sort::Classifier;
    default: fail("o2f", "expression has no scalar sort: " + t.to_string());
  }
}

// Free iterator variables of `e` that are bound in the current environment as
// quantified variables (not global constants): these parametrise set
// definitions.
std::vector<std::string> set_params(const ocl::ExprPtr& e,
                                    const std::map<std::string, o2f::VarEntry>& vars) {
  std::vector<std::string> out;
  for (const auto& name : ocl::free_vars(e)) {
    auto it = vars.find(name);
    if (it == vars.end()) continue;
    if (it->second.kind == o2f::VarEntry::Kind::Scalar && it->second.term &&
        it->second.term->kind == msfol::Term::Kind::BoundVar)
      out.push_back(name);
  }
  return out;
}

}  // namespace

// Emits (once) the defining axiom of the predicate for set expression `e` and
// returns its name. The definition is parametric in the iterator variables
// free in `e`.
std::string Translator::ensure_set_def(const ocl::ExprPtr& e, const Env& env,
                                       const SetOcc& occ) {
  const std::string key = ocl::print(e);
  const std::string pred = "def_" + msfol::sanitize_symbol(key);
  if (defined_sets_.count(key)) return pred;
  defined_sets_.insert(key);

  std::vector<Sort> sig = occ.param_sorts;
  sig.push_back(occ.elem);
  defs_.declare({pred, sig, Sort::Bool});

  // Definition environment: parameters become universally bound variables.
  const std::vector<std::string> params = set_params(e, env.vars);
  Env def_env = globals_;
  std::vector<Binder> binders;
  std::vector<TermPtr> param_terms;
  for (size_t i = 0; i < params.size(); ++i) {
    VarEntry entry;
    entry.kind = VarEntry::Kind::Scalar;
    entry.sort = occ.param_sorts[i];
    entry.term = mk::bound(params[i], entry.sort);
    def_env.vars[params[i]] = entry;
    binders.push_back({params[i], entry.sort});
    param_terms.push_back(entry.term);
  }

  std::string elem_name = fresh_binder(
      e->kind == Expr::Kind::Iterate ? e->iter_var : std::string("x"), def_env);
  TermPtr elem = mk::bound(elem_name, occ.elem);
  binders.push_back({elem_name, occ.elem});

  TermPtr body;
  switch (e->kind) {
    case Expr::Kind::AllInstances: body = class_pred(e->text, elem); break;
    case Expr::Kind::Navigation: {
      ValueInfo src = value_info(e->src, def_env, std::nullopt);
      body = e->nav_to_left ? assoc_pred(e->assoc, elem, src.term)
                            : assoc_pred(e->assoc, src.term, elem);
      break;
    }
    case Expr::Kind::Iterate: {
      SetOcc src = set_info(e->src, def_env);
      Env body_env = def_env;
      VarEntry iter;
      iter.kind = VarEntry::Kind::Scalar;
      iter.sort = occ.elem;
      if (e->iter_kind == Expr::IterKind::Collect) {
        // y is in the set iff some source element maps to it.
        Sort src_elem = src.elem;
        std::string v_name = fresh_binder(e->iter_var, def_env);
        iter.sort = src_elem;
        iter.term = mk::bound(v_name, src_elem);
        body_env.vars[e->iter_var] = iter;
        ValueInfo val = value_info(e->arg, body_env, std::nullopt);
        body = mk::exists({{v_name, src_elem}},
                          mk::and_({apply_set(src, iter.term), mk::eq(elem, val.term)}));
      } else {
        iter.term = elem;
        body_env.vars[e->iter_var] = iter;
        BoolInfo b = bool_info(e->arg, body_env);
        TermPtr keep = e->iter_kind == Expr::IterKind::Select ? b.t : b.f;
        body = mk::and_({apply_set(src, elem), keep});
      }
      break;
    }
    case Expr::Kind::CollBinary: {
      SetOcc src = set_info(e->src, def_env);
      switch (e->coll_bin) {
        case Expr::CollBinKind::Including: {
          ValueInfo v = value_info(e->arg, def_env, occ.elem);
          body = mk::or_({apply_set(src, elem), mk::eq(elem, v.term)});
          break;
        }
        case Expr::CollBinKind::Excluding: {
          ValueInfo v = value_info(e->arg, def_env, occ.elem);
          body = mk::and_({apply_set(src, elem), mk::ne(elem, v.term)});
          break;
        }
        case Expr::CollBinKind::Union:
        case Expr::CollBinKind::Intersection: {
          SetOcc rhs = set_info(e->arg, def_env);
          TermPtr a = apply_set(src, elem);
          TermPtr b = apply_set(rhs, elem);
          body = e->coll_bin == Expr::CollBinKind::Union ? mk::or_({a, b})
                                                         : mk::and_({a, b});
          break;
        }
      }
      break;
    }
    default: fail("o2f", "not a set expression: " + key);
  }

  TermPtr head = mk::app(pred, sig, Sort::Bool, [&] {
    std::vector<TermPtr> args = param_terms;
    args.push_back(elem);
    return args;
  }());
  defs_.add_axiom(mk::forall(binders, mk::iff(head, body)), key);
  return pred;
}

Translator::SetOcc Translator::set_info(const ocl::ExprPtr& e, const Env& env) {
  SetOcc occ;
  if (!e->type.is_set()) fail("o2f", "expected a set expression");
  occ.elem = sort_of_type(*e->type.elem);

  const std::vector<std::string> params = set_params(e, env.vars);
  for (const auto& p : params) {
    const VarEntry& entry = env.vars.at(p);
    occ.params.push_back(entry.term);
    occ.param_sorts.push_back(entry.sort);
  }

  // Invalidity of the collection under the occurrence environment.
  switch (e->kind) {
    case Expr::Kind::AllInstances: occ.is_inval = mk::fls(); break;
    case Expr::Kind::Navigation: {
      ValueInfo src = value_info(e->src, env, std::nullopt);
      occ.is_inval = src.is_inval;
      break;
    }
    case Expr::Kind::Iterate: {
      SetOcc src = set_info(e->src, env);
      Env body_env = env;
      std::string v_name = fresh_binder(e->iter_var, env);
      VarEntry iter;
      iter.kind = VarEntry::Kind::Scalar;
      iter.sort = src.elem;
      iter.term = mk::bound(v_name, src.elem);
      body_env.vars[e->iter_var] = iter;
      TermPtr body_inval;
      if (e->iter_kind == Expr::IterKind::Collect) {
        ValueInfo val = value_info(e->arg, body_env, std::nullopt);
        body_inval = val.is_inval;
      } else {
        body_inval = bool_info(e->arg, body_env).i;
      }
      occ.is_inval = mk::or_(
          {src.is_inval, mk::exists({{v_name, src.elem}},
                                    mk::and_({apply_set(src, iter.term), body_inval}))});
      break;
    }
    case Expr::Kind::CollBinary: {
      SetOcc src = set_info(e->src, env);
      if (e->coll_bin == Expr::CollBinKind::Union ||
          e->coll_bin == Expr::CollBinKind::Intersection) {
        SetOcc rhs = set_info(e->arg, env);
        occ.is_inval = mk::or_({src.is_inval, rhs.is_inval});
      } else {
        ValueInfo v = value_info(e->arg, env, occ.elem);
        occ.is_inval = mk::or_({src.is_inval, v.is_inval});
      }
      break;
    }
    default: fail("o2f", "unsupported set expression");
  }

  occ.pred = ensure_set_def(e, env, occ);
  return occ;
}

Translator::ValueInfo Translator::value_info(const ocl::ExprPtr& e, const Env& env,
                                             std::optional<Sort> hint) {
  ValueInfo out;
  switch (e->kind) {
    case Expr::Kind::IntLit: {
      out.sort = Sort::Int;
      out.term = mk::int_lit(e->int_value);
      out.is_null = mk::fls();
      out.is_inval = mk::fls();
      literal_axiom(out.term, Sort::Int, std::to_string(e->int_value));
      return out;
    }
    case Expr::Kind::StrLit: {
      out.sort = Sort::String;
      out.term = mk::str_lit(e->text);
      out.is_null = mk::fls();
      out.is_inval = mk::fls();
      literal_axiom(out.term, Sort::String, "'" + e->text + "'");
      return out;
    }
    case Expr::Kind::NullLit: {
      out.sort = hint.value_or(Sort::Int);
      out.term = null_of(out.sort);
      out.is_null = mk::tru();
      out.is_inval = mk::fls();
      return out;
    }
    case Expr::Kind::Var: {
      auto it = env.vars.find(e->text);
      if (it == env.vars.end()) fail("o2f", "unbound variable '" + e->text + "'");
      if (it->second.kind != VarEntry::Kind::Scalar)
        fail("o2f", "Boolean variable '" + e->text + "' used as a value");
      out.sort = it->second.sort;
      out.term = it->second.term;
      out.is_null = mk::eq(out.term, null_of(out.sort));
      out.is_inval = mk::eq(out.term, inval_of(out.sort));
      return out;
    }
    case Expr::Kind::AttrAccess: {
      ValueInfo src = value_info(e->src, env, std::nullopt);
      const Attribute* attr = dm_.find_attribute(e->src->type.cls, e->text);
      if (!attr) fail("o2f", "unknown attribute " + e->text);
      out.sort = attr_sort(*attr);
      out.term =
          mk::app(attr_symbol(dm_, *attr), {Sort::Classifier}, out.sort, {src.term});
      // Access on null or invalid is invalid; otherwise the stored value
      // decides nullness.
      TermPtr src_undef = mk::or_({src.is_null, src.is_inval});
      out.is_inval = src_undef;
      out.is_null =
          mk::and_({mk::not_(src_undef), mk::eq(out.term, null_of(out.sort))});
      return out;
    }
    default: fail("o2f", "unsupported value expression: " + ocl::print(e));
  }
}

BoolInfo Translator::bool_info(const ocl::ExprPtr& e, const Env& env) {
  switch (e->kind) {
    case Expr::Kind::BoolLit: {
      if (e->bool_value) return {mk::tru(), mk::fls(), mk::fls(), mk::fls()};
      return {mk::fls(), mk::tru(), mk::fls(), mk::fls()};
    }
    case Expr::Kind::NullLit: return {mk::fls(), mk::fls(), mk::tru(), mk::fls()};
    case Expr::Kind::Var: {
      auto it = env.vars.find(e->text);
      if (it == env.vars.end()) fail("o2f", "unbound variable '" + e->text + "'");
      const VarEntry& v = it->second;
      if (v.kind != VarEntry::Kind::Boolean)
        fail("o2f", "variable '" + e->text + "' is not Boolean");
      TermPtr f = mk::and_({mk::not_(v.is_true), mk::not_(v.is_null), mk::not_(v.is_inval)});
      return {v.is_true, f, v.is_null, v.is_inval};
    }
    case Expr::Kind::BoolNot: {
      BoolInfo a = bool_info(e->src, env);
      return {a.f, a.t, a.n, a.i};
    }
    case Expr::Kind::BoolBinary: {
      BoolInfo a = bool_info(e->src, env);
      BoolInfo b = bool_info(e->arg, env);
      if (e->bool_bin == Expr::BoolBinKind::Implies) {
        // a implies b == (not a) or b
        a = {a.f, a.t, a.n, a.i};
        return {
            mk::or_({a.t, b.t}),
            mk::and_({a.f, b.f}),
            mk::and_({mk::or_({a.n, b.n}), mk::not_(a.t), mk::not_(b.t), mk::not_(a.i),
                      mk::not_(b.i)}),
            mk::and_({mk::or_({a.i, b.i}), mk::not_(a.t), mk::not_(b.t)}),
        };
      }
      if (e->bool_bin == Expr::BoolBinKind::And) {
        return {
            mk::and_({a.t, b.t}),
            mk::or_({a.f, b.f}),
            mk::and_({mk::or_({a.n, b.n}), mk::not_(a.f), mk::not_(b.f), mk::not_(a.i),
                      mk::not_(b.i)}),
            mk::and_({mk::or_({a.i, b.i}), mk::not_(a.f), mk::not_(b.f)}),
        };
      }
      return {
          mk::or_({a.t, b.t}),
          mk::and_({a.f, b.f}),
          mk::and_({mk::or_({a.n, b.n}), mk::not_(a.t), mk::not_(b.t), mk::not_(a.i),
                    mk::not_(b.i)}),
          mk::and_({mk::or_({a.i, b.i}), mk::not_(a.t), mk::not_(b.t)}),
      };
    }
    case Expr::Kind::IsUndefined: {
      if (e->src->type.is_boolean() && e->src->kind != Expr::Kind::NullLit &&
          e->src->type.kind == ocl::Type::Kind::Bool) {
        BoolInfo a = bool_info(e->src, env);
        TermPtr undef = mk::or_({a.n, a.i});
        return {undef, mk::not_(undef), mk::fls(), mk::fls()};
      }
      ValueInfo v = value_info(e->src, env, std::nullopt);
      TermPtr undef = mk::or_({v.is_null, v.is_inval});
      return {undef, mk::not_(undef), mk::fls(), mk::fls()};
    }
    case Expr::Kind::Compare: {
      const bool is_eq = e->cmp == Expr::CmpKind::Eq || e->cmp == Expr::CmpKind::Ne;
      if (is_eq) {
        // Equality over Booleans compares truth values; over scalars it
        // compares terms (null is an ordinary value, invalid is strict).
        bool boolish = e->src->type.kind == ocl::Type::Kind::Bool ||
                       e->arg->type.kind == ocl::Type::Kind::Bool;
        if (boolish) {
          BoolInfo a = bool_info(e->src, env);
          BoolInfo b = bool_info(e->arg, env);
          TermPtr defined = mk::and_({mk::not_(a.i), mk::not_(b.i)});
          TermPtr same = mk::or_(
              {mk::and_({a.t, b.t}), mk::and_({a.f, b.f}), mk::and_({a.n, b.n})});
          TermPtr t = mk::and_({defined, same});
          TermPtr f = mk::and_({defined, mk::not_(same)});
          TermPtr i = mk::or_({a.i, b.i});
          if (e->cmp == Expr::CmpKind::Ne) std::swap(t, f);
          return {t, f, mk::fls(), i};
        }
        std::optional<Sort> hint;
        if (e->src->kind != Expr::Kind::NullLit)
          hint = sort_of_type(e->src->type);
        else if (e->arg->kind != Expr::Kind::NullLit)
          hint = sort_of_type(e->arg->type);
        ValueInfo a = value_info(e->src, env, hint);
        ValueInfo b = value_info(e->arg, env, hint);
        TermPtr defined = mk::and_({mk::not_(a.is_inval), mk::not_(b.is_inval)});
        TermPtr same = mk::eq(a.term, b.term);
        TermPtr t = mk::and_({defined, same});
        TermPtr f = mk::and_({defined, mk::not_(same)});
        TermPtr i = mk::or_({a.is_inval, b.is_inval});
        if (e->cmp == Expr::CmpKind::Ne) std::swap(t, f);
        return {t, f, mk::fls(), i};
      }
      // Ordering comparisons are strict in null and invalid.
      ValueInfo a = value_info(e->src, env, Sort::Int);
      ValueInfo b = value_info(e->arg, env, Sort::Int);
      TermPtr defined = mk::and_({mk::not_(a.is_null), mk::not_(a.is_inval),
                                  mk::not_(b.is_null), mk::not_(b.is_inval)});
      TermPtr cmp;
      switch (e->cmp) {
        case Expr::CmpKind::Lt: cmp = mk::lt(a.term, b.term); break;
        case Expr::CmpKind::Le: cmp = mk::le(a.term, b.term); break;
        case Expr::CmpKind::Gt: cmp = mk::gt(a.term, b.term); break;
        case Expr::CmpKind::Ge: cmp = mk::ge(a.term, b.term); break;
        default: fail("o2f", "unreachable");
      }
      return {
          mk::and_({defined, cmp}),
          mk::and_({defined, mk::not_(cmp)}),
          mk::fls(),
          mk::or_({a.is_null, a.is_inval, b.is_null, b.is_inval}),
      };
    }
    case Expr::Kind::CollTest: {
      SetOcc s = set_info(e->src, env);
      std::string x = fresh_binder("x", env);
      TermPtr xv = mk::bound(x, s.elem);
      TermPtr some = mk::exists({{x, s.elem}}, apply_set(s, xv));
      TermPtr none = mk::forall({{x, s.elem}}, mk::not_(apply_set(s, xv)));
      TermPtr ok = mk::not_(s.is_inval);
      bool is_empty = e->coll_test == Expr::CollTestKind::IsEmpty;
      return {
          mk::and_({ok, is_empty ? none : some}),
          mk::and_({ok, is_empty ? some : none}),
          mk::fls(),
          s.is_inval,
      };
    }
    case Expr::Kind::Iterate: {
      if (e->iter_kind != Expr::IterKind::ForAll && e->iter_kind != Expr::IterKind::Exists)
        fail("o2f", "select/reject/collect are set-valued; use them under a Boolean operation");
      SetOcc s = set_info(e->src, env);
      Env body_env = env;
      std::string v_name = fresh_binder(e->iter_var, env);
      VarEntry iter;
      iter.kind = VarEntry::Kind::Scalar;
      iter.sort = s.elem;
      iter.term = mk::bound(v_name, s.elem);
      body_env.vars[e->iter_var] = iter;
      BoolInfo b = bool_info(e->arg, body_env);
      TermPtr ok = mk::not_(s.is_inval);
      // Certain-answer semantics: an element whose body is null or invalid
      // neither witnesses nor refutes the quantifier.
      if (e->iter_kind == Expr::IterKind::ForAll) {
        TermPtr no_false =
            mk::forall({{v_name, s.elem}},
                       mk::implies(apply_set(s, iter.term), mk::not_(b.f)));
        TermPtr some_false =
            mk::exists({{v_name, s.elem}}, mk::and_({apply_set(s, iter.term), b.f}));
        return {mk::and_({ok, no_false}), mk::and_({ok, some_false}), mk::fls(), s.is_inval};
      }
      TermPtr some_true =
          mk::exists({{v_name, s.elem}}, mk::and_({apply_set(s, iter.term), b.t}));
      TermPtr no_true = mk::forall(
          {{v_name, s.elem}}, mk::implies(apply_set(s, iter.term), mk::not_(b.t)));
      return {mk::and_({ok, some_true}), mk::and_({ok, no_true}), mk::fls(), s.is_inval};
    }
    default:
      fail("o2f", "unsupported Boolean construct: " + ocl::print(e));
  }
}

}  // namespace oclsql::o2f
