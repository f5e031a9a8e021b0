#include "oclsql/datamodel.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace oclsql {

using nlohmann::json;

bool DataModel::has_class(const std::string& name) const {
  return std::find(classes.begin(), classes.end(), name) != classes.end();
}

const Attribute* DataModel::find_attribute(const std::string& cls, const std::string& attr) const {
  for (const auto& a : attributes)
    if (a.owner == cls && a.name == attr) return &a;
  return nullptr;
}

std::vector<const Attribute*> DataModel::attributes_of(const std::string& cls) const {
  std::vector<const Attribute*> out;
  for (const auto& a : attributes)
    if (a.owner == cls) out.push_back(&a);
  return out;
}

const Association* DataModel::find_association(const std::string& name) const {
  for (const auto& a : associations)
    if (a.name == name) return &a;
  return nullptr;
}

void DataModel::validate() const {
  std::set<std::string> seen_classes;
  for (const auto& c : classes)
    if (!seen_classes.insert(c).second) fail("data model", "duplicate class '" + c + "'");
  std::set<std::pair<std::string, std::string>> seen_attrs;
  for (const auto& a : attributes) {
    if (!has_class(a.owner))
      fail("data model", "attribute '" + a.name + "' owned by unknown class '" + a.owner + "'");
    if (!seen_attrs.insert({a.owner, a.name}).second)
      fail("data model", "duplicate attribute '" + a.name + "' in class '" + a.owner + "'");
    if (a.type.kind == AttrType::Kind::Class && !has_class(a.type.class_name))
      fail("data model",
           "attribute '" + a.name + "' has unknown class type '" + a.type.class_name + "'");
  }
  std::set<std::string> seen_assocs;
  for (const auto& as : associations) {
    if (!seen_assocs.insert(as.name).second)
      fail("data model", "duplicate association '" + as.name + "'");
    if (!has_class(as.left_class))
      fail("data model", "association '" + as.name + "' references unknown class '" +
                             as.left_class + "'");
    if (!has_class(as.right_class))
      fail("data model", "association '" + as.name + "' references unknown class '" +
                             as.right_class + "'");
    if (as.left_end == as.right_end)
      fail("data model", "association '" + as.name + "' has identical end names");
  }
}

bool OclScalar::operator<(const OclScalar& other) const {
  if (kind != other.kind) return kind < other.kind;
  switch (kind) {
    case Kind::Null: return false;
    case Kind::Int: return int_value < other.int_value;
    case Kind::String: return str_value < other.str_value;
    case Kind::Bool: return bool_value < other.bool_value;
    case Kind::Object: return object < other.object;
  }
  return false;
}

const Object* ObjectModel::find_object(ObjectId id) const {
  for (const auto& o : objects)
    if (o.id == id) return &o;
  return nullptr;
}

std::vector<ObjectId> ObjectModel::objects_of_class(const std::string& cls) const {
  std::vector<ObjectId> out;
  for (const auto& o : objects)
    if (o.cls == cls) out.push_back(o.id);
  return out;
}

OclScalar ObjectModel::attribute_value(const std::string& attr, ObjectId id) const {
  auto it = attribute_values.find({attr, id});
  return it == attribute_values.end() ? OclScalar::null() : it->second;
}

bool ObjectModel::has_link(const std::string& assoc, ObjectId left, ObjectId right) const {
  for (const auto& l : links)
    if (l.assoc == assoc && l.left == left && l.right == right) return true;
  return false;
}

void ObjectModel::validate(const DataModel& dm) const {
  std::set<ObjectId> ids;
  for (const auto& o : objects) {
    if (o.id <= 0) fail("object model", "object id " + std::to_string(o.id) + " is not positive");
    if (!ids.insert(o.id).second)
      fail("object model", "duplicate object id " + std::to_string(o.id));
    if (!dm.has_class(o.cls))
      fail("object model", "object " + std::to_string(o.id) + " has unknown class '" + o.cls + "'");
  }
  for (const auto& [key, value] : attribute_values) {
    const auto& [attr_name, oid] = key;
    const Object* obj = find_object(oid);
    if (!obj) fail("object model", "attribute on unknown object " + std::to_string(oid));
    const Attribute* attr = dm.find_attribute(obj->cls, attr_name);
    if (!attr)
      fail("object model",
           "class '" + obj->cls + "' has no attribute '" + attr_name + "'");
    if (value.is_null()) continue;
    switch (attr->type.kind) {
      case AttrType::Kind::Integer:
        if (value.kind != OclScalar::Kind::Int)
          fail("object model", "attribute '" + attr_name + "' expects an integer");
        break;
      case AttrType::Kind::String:
        if (value.kind != OclScalar::Kind::String)
          fail("object model", "attribute '" + attr_name + "' expects a string");
        break;
      case AttrType::Kind::Class: {
        if (value.kind != OclScalar::Kind::Object)
          fail("object model", "attribute '" + attr_name + "' expects an object reference");
        const Object* target = find_object(value.object);
        if (!target || target->cls != attr->type.class_name)
          fail("object model", "attribute '" + attr_name + "' must reference an existing " +
                                   attr->type.class_name);
        break;
      }
    }
  }
  for (const auto& l : links) {
    const Association* as = dm.find_association(l.assoc);
    if (!as) fail("object model", "link uses unknown association '" + l.assoc + "'");
    const Object* lo = find_object(l.left);
    const Object* ro = find_object(l.right);
    if (!lo || lo->cls != as->left_class)
      fail("object model", "link '" + l.assoc + "' left object " + std::to_string(l.left) +
                               " is not an existing " + as->left_class);
    if (!ro || ro->cls != as->right_class)
      fail("object model", "link '" + l.assoc + "' right object " + std::to_string(l.right) +
                               " is not an existing " + as->right_class);
  }
}

bool ObjectModel::operator==(const ObjectModel& other) const {
  auto key = [](const ObjectModel& om) {
    std::vector<std::tuple<ObjectId, std::string>> objs;
    for (const auto& o : om.objects) objs.emplace_back(o.id, o.cls);
    std::sort(objs.begin(), objs.end());
    std::vector<std::tuple<std::string, ObjectId, ObjectId>> lks;
    for (const auto& l : om.links) lks.emplace_back(l.assoc, l.left, l.right);
    std::sort(lks.begin(), lks.end());
    return std::make_tuple(objs, lks);
  };
  if (key(*this) != key(other)) return false;
  // Attribute maps compare modulo explicit-null entries.
  auto non_null = [](const ObjectModel& om) {
    std::map<std::pair<std::string, ObjectId>, OclScalar> out;
    for (const auto& [k, v] : om.attribute_values)
      if (!v.is_null()) out.emplace(k, v);
    return out;
  };
  return non_null(*this) == non_null(other);
}

namespace {

json parse_json(const std::string& text, const char* what) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) fail(what, "malformed JSON");
  return doc;
}

AttrType parse_attr_type(const std::string& type_name, const DataModel& dm,
                         const std::string& where) {
  if (type_name == "Integer") return {AttrType::Kind::Integer, ""};
  if (type_name == "String") return {AttrType::Kind::String, ""};
  if (!dm.has_class(type_name))
    fail(where, "unknown type '" + type_name + "'");
  return {AttrType::Kind::Class, type_name};
}

}  // namespace

DataModel load_data_model(const std::string& json_text) {
  json doc = parse_json(json_text, "data model");
  DataModel dm;
  if (doc.contains("classes")) {
    if (!doc["classes"].is_object()) fail("data model", "'classes' must be an object");
    for (const auto& [name, attrs] : doc["classes"].items()) dm.classes.push_back(name);
    std::sort(dm.classes.begin(), dm.classes.end());
    for (const auto& cls : dm.classes) {
      const json& attrs = doc["classes"][cls];
      if (!attrs.is_array()) fail("data model", "attributes of '" + cls + "' must be an array");
      for (const auto& a : attrs) {
        if (!a.contains("name") || !a.contains("type"))
          fail("data model", "attribute of '" + cls + "' needs 'name' and 'type'");
        Attribute attr;
        attr.name = a["name"].get<std::string>();
        attr.owner = cls;
        attr.type = parse_attr_type(a["type"].get<std::string>(), dm,
                                    "attribute '" + attr.name + "' of '" + cls + "'");
        dm.attributes.push_back(attr);
      }
    }
  }
  if (doc.contains("associations")) {
    if (!doc["associations"].is_array()) fail("data model", "'associations' must be an array");
    for (const auto& a : doc["associations"]) {
      Association as;
      as.name = a.at("name").get<std::string>();
      as.left_end = a.at("leftEnd").get<std::string>();
      as.left_class = a.at("leftClass").get<std::string>();
      as.right_end = a.at("rightEnd").get<std::string>();
      as.right_class = a.at("rightClass").get<std::string>();
      dm.associations.push_back(as);
    }
  }
  dm.validate();
  return dm;
}

ObjectModel load_object_model(const std::string& json_text, const DataModel& dm) {
  json doc = parse_json(json_text, "object model");
  ObjectModel om;
  if (doc.contains("objects")) {
    for (const auto& o : doc["objects"]) {
      Object obj;
      obj.id = o.at("id").get<long long>();
      obj.cls = o.at("class").get<std::string>();
      om.objects.push_back(obj);
      if (o.contains("attrs")) {
        for (const auto& [attr_name, value] : o["attrs"].items()) {
          OclScalar v;
          if (value.is_null()) {
            v = OclScalar::null();
          } else if (value.is_number_integer()) {
            const Attribute* attr = dm.find_attribute(obj.cls, attr_name);
            // Class-typed attributes are written as object ids.
            if (attr && attr->type.kind == AttrType::Kind::Class)
              v = OclScalar::of_object(value.get<long long>());
            else
              v = OclScalar::of_int(value.get<long long>());
          } else if (value.is_string()) {
            v = OclScalar::of_string(value.get<std::string>());
          } else {
            fail("object model", "unsupported attribute value for '" + attr_name + "'");
          }
          om.attribute_values[{attr_name, obj.id}] = v;
        }
      }
    }
  }
  if (doc.contains("links")) {
    for (const auto& l : doc["links"]) {
      Link link;
      link.assoc = l.at("assoc").get<std::string>();
      link.left = l.at("left").get<long long>();
      link.right = l.at("right").get<long long>();
      om.links.push_back(link);
    }
  }
  om.validate(dm);
  return om;
}

std::string print_object_model(const ObjectModel& om) {
  json doc;
  doc["objects"] = json::array();
  for (const auto& o : om.objects) {
    json obj;
    obj["id"] = o.id;
    obj["class"] = o.cls;
    json attrs = json::object();
    for (const auto& [key, value] : om.attribute_values) {
      if (key.second != o.id) continue;
      switch (value.kind) {
        case OclScalar::Kind::Null: attrs[key.first] = nullptr; break;
        case OclScalar::Kind::Int: attrs[key.first] = value.int_value; break;
        case OclScalar::Kind::String: attrs[key.first] = value.str_value; break;
        case OclScalar::Kind::Object: attrs[key.first] = value.object; break;
        case OclScalar::Kind::Bool: attrs[key.first] = value.bool_value; break;
      }
    }
    obj["attrs"] = attrs;
    doc["objects"].push_back(obj);
  }
  doc["links"] = json::array();
  for (const auto& l : om.links) {
    json link;
    link["assoc"] = l.assoc;
    link["left"] = l.left;
    link["right"] = l.right;
    doc["links"].push_back(link);
  }
  return doc.dump(2);
}

namespace {

// Odometer over per-slot choice counts; visits all combinations in
// lexicographic order.
void for_each_combination(const std::vector<size_t>& radix,
                          const std::function<void(const std::vector<size_t>&)>& visit) {
  std::vector<size_t> digits(radix.size(), 0);
  while (true) {
    visit(digits);
    size_t i = 0;
    while (i < radix.size()) {
      if (++digits[i] < radix[i]) break;
      digits[i] = 0;
      ++i;
    }
    if (i == radix.size()) break;
    if (radix.empty()) break;
  }
}

}  // namespace

std::vector<ObjectModel> enumerate_object_models(const DataModel& dm,
                                                 const EnumerationBounds& bounds) {
  std::vector<ObjectModel> out;

  // Enumerate object counts per class first.
  std::vector<size_t> count_radix(dm.classes.size(),
                                  static_cast<size_t>(bounds.max_objects_per_class) + 1);
  if (count_radix.empty()) count_radix.push_back(1);

  for_each_combination(count_radix, [&](const std::vector<size_t>& counts) {
    ObjectModel base;
    ObjectId next_id = 1;
    for (size_t ci = 0; ci < dm.classes.size(); ++ci) {
      for (size_t k = 0; k < counts[ci]; ++k) base.objects.push_back({next_id++, dm.classes[ci]});
    }

    // Attribute slots: one per (object, attribute of its class).
    struct Slot {
      ObjectId object;
      const Attribute* attr;
      std::vector<OclScalar> domain;
    };
    std::vector<Slot> slots;
    for (const auto& obj : base.objects) {
      for (const Attribute* attr : dm.attributes_of(obj.cls)) {
        Slot slot{obj.id, attr, {}};
        switch (attr->type.kind) {
          case AttrType::Kind::Integer: slot.domain = bounds.int_domain; break;
          case AttrType::Kind::String: slot.domain = bounds.string_domain; break;
          case AttrType::Kind::Class: {
            slot.domain.push_back(OclScalar::null());
            for (const auto& target : base.objects)
              if (target.cls == attr->type.class_name)
                slot.domain.push_back(OclScalar::of_object(target.id));
            break;
          }
        }
        if (slot.domain.empty()) fail("enumerate", "empty attribute domain");
        slots.push_back(std::move(slot));
      }
    }

    // Candidate links: all pairs per association.
    std::vector<Link> candidate_links;
    for (const auto& as : dm.associations) {
      for (const auto& lo : base.objects) {
        if (lo.cls != as.left_class) continue;
        for (const auto& ro : base.objects) {
          if (ro.cls != as.right_class) continue;
          candidate_links.push_back({as.name, lo.id, ro.id});
        }
      }
    }

    std::vector<size_t> slot_radix;
    for (const auto& s : slots) slot_radix.push_back(s.domain.size());
    for (size_t i = 0; i < candidate_links.size(); ++i) slot_radix.push_back(2);
    if (slot_radix.empty()) slot_radix.push_back(1);

    for_each_combination(slot_radix, [&](const std::vector<size_t>& digits) {
      ObjectModel om = base;
      size_t di = 0;
      for (const auto& s : slots) {
        const OclScalar& v = s.domain[digits[di++]];
        if (!v.is_null()) om.attribute_values[{s.attr->name, s.object}] = v;
      }
      for (const auto& link : candidate_links) {
        if (digits[di++] == 1) om.links.push_back(link);
      }
      out.push_back(std::move(om));
    });
  });
  return out;
}

std::vector<Assignment> enumerate_assignments(const std::vector<TypedVar>& vars,
                                              const ObjectModel& om,
                                              const EnumerationBounds& bounds) {
  std::vector<std::vector<OclScalar>> domains;
  for (const auto& v : vars) {
    std::vector<OclScalar> domain;
    if (v.type == "Integer") {
      domain = bounds.int_domain;
    } else if (v.type == "String") {
      domain = bounds.string_domain;
    } else if (v.type == "Boolean") {
      domain = {OclScalar::null(), OclScalar::of_bool(false), OclScalar::of_bool(true)};
    } else {
      domain.push_back(OclScalar::null());
      for (ObjectId id : om.objects_of_class(v.type)) domain.push_back(OclScalar::of_object(id));
    }
    if (domain.empty()) fail("enumerate", "empty domain for variable '" + v.name + "'");
    domains.push_back(std::move(domain));
  }

  std::vector<size_t> radix;
  for (const auto& d : domains) radix.push_back(d.size());
  if (radix.empty()) radix.push_back(1);

  std::vector<Assignment> out;
  for_each_combination(radix, [&](const std::vector<size_t>& digits) {
    Assignment a;
    for (size_t i = 0; i < vars.size(); ++i) a.bindings[vars[i].name] = domains[i][digits[i]];
    out.push_back(std::move(a));
  });
  return out;
}

}  // namespace oclsql
