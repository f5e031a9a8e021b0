#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oclsql/datamodel.hpp"
#include "oclsql/msfol.hpp"
#include "oclsql/ocl2msfol.hpp"
#include "oclsql/relational.hpp"
#include "oclsql/sql2msfol.hpp"
#include "oclsql/sql_exec.hpp"

// Builds theories that pin one finite instance and one assignment as ground
// facts, so the translation's axioms can be checked against the interpreter
// row by row.

namespace pinning {

using namespace oclsql;
namespace mk = msfol::mk;

struct Pinned {
  msfol::Theory theory;      // data theory + schema axioms + statement axioms + facts
  s2f::Output s2f;
  bool scalar_error = false; // statement not executable on this instance
  size_t row_count = 0;
  std::optional<rel::SqlValue> cell;  // first cell when exactly one row
};

inline msfol::TermPtr object_const(ObjectId id) {
  return mk::sym("obj" + std::to_string(id), msfol::Sort::Classifier);
}

inline msfol::TermPtr scalar_term(const OclScalar& v, msfol::Sort sort) {
  switch (v.kind) {
    case OclScalar::Kind::Null: return o2f::null_of(sort);
    case OclScalar::Kind::Int: return mk::int_lit(v.int_value);
    case OclScalar::Kind::String: return mk::str_lit(v.str_value);
    case OclScalar::Kind::Object: return object_const(v.object);
    case OclScalar::Kind::Bool: fail("pin", "boolean values cannot be pinned");
  }
  fail("pin", "unreachable");
}

inline Pinned pin_instance(const DataModel& dm, const rel::SqlSchema& schema,
                           const sql::SelectPtr& sel, const std::vector<TypedVar>& vars,
                           const ObjectModel& om, const Assignment& sigma) {
  Pinned out;
  o2f::FreeDecls frees = o2f::declare_frees(vars, dm);
  // Keep the declarations but drop the membership axioms: pinned assignments
  // may bind null, which the prover-side constraint would exclude.
  msfol::Theory free_decls;
  for (const auto& d : frees.theory.declarations()) free_decls.declare(d);

  out.s2f = s2f::s2f_select(sel, dm, schema, frees);
  msfol::Theory t = o2f::o2f_data(dm);
  t = msfol::theory_union(t, free_decls);
  t = msfol::theory_union(t, out.s2f.schema_axioms);
  t = msfol::theory_union(t, out.s2f.select_axioms);

  // Ground facts describing the instance.
  std::vector<msfol::TermPtr> domain = {o2f::null_of(msfol::Sort::Classifier),
                                        o2f::inval_of(msfol::Sort::Classifier)};
  for (const auto& obj : om.objects) {
    t.declare({"obj" + std::to_string(obj.id), {}, msfol::Sort::Classifier});
    domain.push_back(object_const(obj.id));
    t.add_axiom(mk::app(msfol::sanitize_symbol(obj.cls), {msfol::Sort::Classifier},
                        msfol::Sort::Bool, {object_const(obj.id)}),
                "object " + std::to_string(obj.id));
    for (const Attribute* attr : dm.attributes_of(obj.cls)) {
      msfol::Sort sort = o2f::attr_sort(*attr);
      OclScalar value = om.attribute_value(attr->name, obj.id);
      msfol::TermPtr lhs = mk::app(o2f::attr_symbol(dm, *attr), {msfol::Sort::Classifier},
                                   sort, {object_const(obj.id)});
      msfol::TermPtr rhs = scalar_term(value, sort);
      t.add_axiom(mk::eq(lhs, rhs));
      if (!value.is_null() && value.kind != OclScalar::Kind::Object) {
        t.add_axiom(mk::ne(rhs, o2f::null_of(sort)));
        t.add_axiom(mk::ne(rhs, o2f::inval_of(sort)));
      }
    }
  }
  if (domain.size() > 2) t.add_axiom(mk::distinct(domain), "object identities");
  // Domain closure: no other objects exist.
  {
    msfol::TermPtr c = mk::bound("c", msfol::Sort::Classifier);
    std::vector<msfol::TermPtr> cases;
    for (const auto& d : domain) cases.push_back(mk::eq(c, d));
    t.add_axiom(mk::forall({{"c", msfol::Sort::Classifier}}, mk::or_(cases)),
                "domain closure");
  }
  // Links, both polarities over the typed candidate pairs.
  for (const auto& as : dm.associations) {
    for (const auto& left : om.objects) {
      if (left.cls != as.left_class) continue;
      for (const auto& right : om.objects) {
        if (right.cls != as.right_class) continue;
        msfol::TermPtr atom = mk::app(msfol::sanitize_symbol(as.name),
                                      {msfol::Sort::Classifier, msfol::Sort::Classifier},
                                      msfol::Sort::Bool,
                                      {object_const(left.id), object_const(right.id)});
        bool linked = om.has_link(as.name, left.id, right.id);
        t.add_axiom(linked ? atom : mk::not_(atom));
      }
    }
  }
  // The assignment.
  for (const auto& v : vars) {
    const OclScalar& value = sigma.bindings.at(v.name);
    const o2f::VarEntry& entry = frees.env.at(v.name);
    t.add_axiom(mk::eq(entry.term, scalar_term(value, entry.sort)), "sigma " + v.name);
    if (!value.is_null() && value.kind != OclScalar::Kind::Object) {
      t.add_axiom(mk::ne(scalar_term(value, entry.sort), o2f::null_of(entry.sort)));
      t.add_axiom(mk::ne(scalar_term(value, entry.sort), o2f::inval_of(entry.sort)));
    }
  }

  // Execute the interpreter for the expected observation.
  rel::DatabaseInstance db = rel::o2s_inst(dm, schema, om);
  try {
    sql::ResultTable rt = sql::exec_sql(db, rel::o2s_inst_assignment(sigma), sel);
    out.row_count = rt.rows.size();
    if (rt.rows.size() == 1 && rt.rows[0].size() == 1) out.cell = rt.rows[0][0];
  } catch (const sql::ScalarCardinalityError&) {
    out.scalar_error = true;
  }

  out.theory = std::move(t);
  return out;
}

// The observation formula: the interpreter's row-count category and, for a
// single-row Boolean result, the value of the select-item.
inline msfol::TermPtr observation(const Pinned& p) {
  msfol::TermPtr single = s2f::single_row_property(p.s2f.top_index);
  msfol::TermPtr count_part = p.row_count == 1 ? single : mk::not_(single);
  if (p.row_count != 1 || !p.cell || p.s2f.top_item_sort != msfol::Sort::SqlBool)
    return count_part;
  msfol::TermPtr expected;
  if (p.cell->is_null())
    expected = mk::sql_null();
  else if (p.cell->kind == rel::SqlValue::Kind::Bool)
    expected = p.cell->bool_value ? mk::sql_true() : mk::sql_false();
  else
    return count_part;
  msfol::TermPtr x = mk::bound("x", msfol::Sort::Int);
  msfol::TermPtr val =
      mk::app(p.s2f.top_item_val, {msfol::Sort::Int}, msfol::Sort::SqlBool, {x});
  return mk::and_({count_part,
                   mk::forall({{"x", msfol::Sort::Int}},
                              mk::implies(mk::app(p.s2f.top_index, {msfol::Sort::Int},
                                                  msfol::Sort::Bool, {x}),
                                          mk::eq(val, expected)))});
}

}  // namespace pinning
