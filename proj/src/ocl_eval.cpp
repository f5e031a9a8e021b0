#include "oclsql/ocl_eval.hpp"

#include <algorithm>

namespace oclsql::ocl {

Value Value::of_set(std::vector<OclScalar> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  Value v;
  v.kind = Kind::Set;
  v.set = std::move(elems);
  return v;
}

/*
Four-valued connective tables (T = true, F = false, N = null, I = invalid):

  not:  T->F  F->T  N->N  I->I

  and:  false if either operand is F;
        otherwise invalid if either operand is I;
        otherwise null if either operand is N;
        otherwise true.

  or:   true if either operand is T;
        otherwise invalid if either operand is I;
        otherwise null if either operand is N;
        otherwise false.

  implies: (not a) or b.
*/
B4 b4_not(B4 a) {
  switch (a) {
    case B4::True: return B4::False;
    case B4::False: return B4::True;
    case B4::Null: return B4::Null;
    case B4::Inval: return B4::Inval;
  }
  return B4::Inval;
}

B4 b4_and(B4 a, B4 b) {
  if (a == B4::False || b == B4::False) return B4::False;
  if (a == B4::Inval || b == B4::Inval) return B4::Inval;
  if (a == B4::Null || b == B4::Null) return B4::Null;
  return B4::True;
}

B4 b4_or(B4 a, B4 b) {
  if (a == B4::True || b == B4::True) return B4::True;
  if (a == B4::Inval || b == B4::Inval) return B4::Inval;
  if (a == B4::Null || b == B4::Null) return B4::Null;
  return B4::False;
}

B4 b4_implies(B4 a, B4 b) { return b4_or(b4_not(a), b); }

B4 truth_of(const Value& v) {
  if (v.is_invalid()) return B4::Inval;
  if (v.kind != Value::Kind::Scalar) return B4::Inval;
  if (v.scalar.is_null()) return B4::Null;
  if (v.scalar.kind != OclScalar::Kind::Bool) return B4::Inval;
  return v.scalar.bool_value ? B4::True : B4::False;
}

Value value_of(B4 b) {
  switch (b) {
    case B4::True: return Value::of(OclScalar::of_bool(true));
    case B4::False: return Value::of(OclScalar::of_bool(false));
    case B4::Null: return Value::of(OclScalar::null());
    case B4::Inval: return Value::invalid();
  }
  return Value::invalid();
}

namespace {

struct Env {
  const ObjectModel& om;
  const Assignment& sigma;
  std::map<std::string, OclScalar> locals;  // iterator variables
};

Value eval(const Env& env, const ExprPtr& e);

Value eval_bool(B4 b) { return value_of(b); }

// Equality over scalar values: invalid is strict, null is an ordinary value
// (null = null is true).
Value eval_equality(const Value& a, const Value& b, bool negate) {
  if (a.is_invalid() || b.is_invalid()) return Value::invalid();
  if (a.kind != Value::Kind::Scalar || b.kind != Value::Kind::Scalar) return Value::invalid();
  bool eq = a.scalar == b.scalar;
  return eval_bool((eq != negate) ? B4::True : B4::False);
}

// Ordering comparisons are strict in both null and invalid.
Value eval_ordering(const Value& a, const Value& b, Expr::CmpKind op) {
  if (a.is_invalid() || b.is_invalid() || a.is_null() || b.is_null()) return Value::invalid();
  if (a.kind != Value::Kind::Scalar || b.kind != Value::Kind::Scalar ||
      a.scalar.kind != OclScalar::Kind::Int || b.scalar.kind != OclScalar::Kind::Int)
    return Value::invalid();
  long long x = a.scalar.int_value, y = b.scalar.int_value;
  bool r = false;
  switch (op) {
    case Expr::CmpKind::Lt: r = x < y; break;
    case Expr::CmpKind::Le: r = x <= y; break;
    case Expr::CmpKind::Gt: r = x > y; break;
    case Expr::CmpKind::Ge: r = x >= y; break;
    default: return Value::invalid();
  }
  return eval_bool(r ? B4::True : B4::False);
}

Value eval_iterate(const Env& env, const ExprPtr& e) {
  Value src = eval(env, e->src);
  if (src.is_invalid()) return Value::invalid();
  if (src.kind != Value::Kind::Set) return Value::invalid();

  Env inner = env;
  auto body_at = [&](const OclScalar& elem) {
    inner.locals[e->iter_var] = elem;
    return eval(inner, e->arg);
  };

  switch (e->iter_kind) {
    // forAll / exists use certain-answer semantics: an element whose body is
    // null or invalid neither witnesses nor refutes the quantifier. This
    // mirrors the WHERE-clause treatment of unknown rows on the SQL side.
    case Expr::IterKind::ForAll: {
      for (const auto& elem : src.set)
        if (truth_of(body_at(elem)) == B4::False) return eval_bool(B4::False);
      return eval_bool(B4::True);
    }
    case Expr::IterKind::Exists: {
      for (const auto& elem : src.set)
        if (truth_of(body_at(elem)) == B4::True) return eval_bool(B4::True);
      return eval_bool(B4::False);
    }
    case Expr::IterKind::Select:
    case Expr::IterKind::Reject: {
      const B4 keep = e->iter_kind == Expr::IterKind::Select ? B4::True : B4::False;
      std::vector<OclScalar> out;
      for (const auto& elem : src.set) {
        B4 b = truth_of(body_at(elem));
        if (b == B4::Inval) return Value::invalid();
        if (b == keep) out.push_back(elem);
      }
      return Value::of_set(std::move(out));
    }
    case Expr::IterKind::Collect: {
      std::vector<OclScalar> out;
      for (const auto& elem : src.set) {
        Value v = body_at(elem);
        if (v.is_invalid() || v.kind != Value::Kind::Scalar) return Value::invalid();
        out.push_back(v.scalar);
      }
      return Value::of_set(std::move(out));
    }
  }
  return Value::invalid();
}

Value eval(const Env& env, const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::BoolLit: return Value::of(OclScalar::of_bool(e->bool_value));
    case Expr::Kind::IntLit: return Value::of(OclScalar::of_int(e->int_value));
    case Expr::Kind::StrLit: return Value::of(OclScalar::of_string(e->text));
    case Expr::Kind::NullLit: return Value::of(OclScalar::null());
    case Expr::Kind::Var: {
      if (auto it = env.locals.find(e->text); it != env.locals.end()) return Value::of(it->second);
      if (auto it = env.sigma.bindings.find(e->text); it != env.sigma.bindings.end())
        return Value::of(it->second);
      fail("eval", "variable '" + e->text + "' is not bound");
    }
    case Expr::Kind::AttrAccess: {
      Value src = eval(env, e->src);
      // Attribute access on null or invalid is invalid.
      if (src.is_invalid() || src.is_null()) return Value::invalid();
      if (src.kind != Value::Kind::Scalar || src.scalar.kind != OclScalar::Kind::Object)
        return Value::invalid();
      return Value::of(env.om.attribute_value(e->text, src.scalar.object));
    }
    case Expr::Kind::Navigation: {
      Value src = eval(env, e->src);
      if (src.is_invalid()) return Value::invalid();
      // Navigation from null yields the empty set: a null source has no links.
      if (src.is_null()) return Value::of_set({});
      if (src.kind != Value::Kind::Scalar || src.scalar.kind != OclScalar::Kind::Object)
        return Value::invalid();
      std::vector<OclScalar> out;
      for (const auto& l : env.om.links) {
        if (l.assoc != e->assoc) continue;
        if (e->nav_to_left && l.right == src.scalar.object)
          out.push_back(OclScalar::of_object(l.left));
        if (!e->nav_to_left && l.left == src.scalar.object)
          out.push_back(OclScalar::of_object(l.right));
      }
      return Value::of_set(std::move(out));
    }
    case Expr::Kind::AllInstances: {
      std::vector<OclScalar> out;
      for (ObjectId id : env.om.objects_of_class(e->text)) out.push_back(OclScalar::of_object(id));
      return Value::of_set(std::move(out));
    }
    case Expr::Kind::IsUndefined: {
      Value src = eval(env, e->src);
      bool undefined = src.is_invalid() || src.is_null();
      return eval_bool(undefined ? B4::True : B4::False);
    }
    case Expr::Kind::Iterate: return eval_iterate(env, e);
    case Expr::Kind::CollTest: {
      Value src = eval(env, e->src);
      if (src.is_invalid() || src.kind != Value::Kind::Set) return Value::invalid();
      bool empty = src.set.empty();
      bool result = e->coll_test == Expr::CollTestKind::IsEmpty ? empty : !empty;
      return eval_bool(result ? B4::True : B4::False);
    }
    case Expr::Kind::CollBinary: {
      Value src = eval(env, e->src);
      Value arg = eval(env, e->arg);
      if (src.is_invalid() || arg.is_invalid()) return Value::invalid();
      if (src.kind != Value::Kind::Set) return Value::invalid();
      std::vector<OclScalar> out = src.set;
      switch (e->coll_bin) {
        case Expr::CollBinKind::Including:
          if (arg.kind != Value::Kind::Scalar) return Value::invalid();
          out.push_back(arg.scalar);
          break;
        case Expr::CollBinKind::Excluding:
          if (arg.kind != Value::Kind::Scalar) return Value::invalid();
          out.erase(std::remove(out.begin(), out.end(), arg.scalar), out.end());
          break;
        case Expr::CollBinKind::Union:
          if (arg.kind != Value::Kind::Set) return Value::invalid();
          out.insert(out.end(), arg.set.begin(), arg.set.end());
          break;
        case Expr::CollBinKind::Intersection: {
          if (arg.kind != Value::Kind::Set) return Value::invalid();
          std::vector<OclScalar> kept;
          for (const auto& x : out)
            if (std::find(arg.set.begin(), arg.set.end(), x) != arg.set.end()) kept.push_back(x);
          out = std::move(kept);
          break;
        }
      }
      return Value::of_set(std::move(out));
    }
    case Expr::Kind::Compare: {
      Value a = eval(env, e->src);
      Value b = eval(env, e->arg);
      if (e->cmp == Expr::CmpKind::Eq) return eval_equality(a, b, false);
      if (e->cmp == Expr::CmpKind::Ne) return eval_equality(a, b, true);
      return eval_ordering(a, b, e->cmp);
    }
    case Expr::Kind::BoolBinary: {
      B4 a = truth_of(eval(env, e->src));
      B4 b = truth_of(eval(env, e->arg));
      switch (e->bool_bin) {
        case Expr::BoolBinKind::And: return eval_bool(b4_and(a, b));
        case Expr::BoolBinKind::Or: return eval_bool(b4_or(a, b));
        case Expr::BoolBinKind::Implies: return eval_bool(b4_implies(a, b));
      }
      return Value::invalid();
    }
    case Expr::Kind::BoolNot: return eval_bool(b4_not(truth_of(eval(env, e->src))));
  }
  return Value::invalid();
}

}  // namespace

Value eval_ocl(const ObjectModel& om, const Assignment& sigma, const ExprPtr& e) {
  Env env{om, sigma, {}};
  return eval(env, e);
}

}  // namespace oclsql::ocl
