#include "portarb/model.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace portarb
{

namespace pt = boost::property_tree;

namespace
{

constexpr const char* kAttr = "<xmlattr>";

std::string trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

pt::ptree read_xml_tree(std::string_view text)
{
  std::istringstream in{std::string(text)};
  pt::ptree tree;
  try {
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace | pt::xml_parser::no_comments);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError("malformed XML (line " + std::to_string(e.line()) + "): " + e.message());
  }
  return tree;
}

std::optional<std::string> attribute(const pt::ptree& node, const std::string& name)
{
  if (auto attrs = node.get_child_optional(kAttr)) {
    if (auto v = attrs->get_optional<std::string>(name))
      return trim(*v);
  }
  return std::nullopt;
}

std::string xml_escape(std::string_view s)
{
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

PortName port_or_throw(const std::string& text, const std::string& context)
{
  if (!PortName::is_valid(text))
    throw ParseError(context + ": invalid port name '" + text + "'");
  return PortName(text);
}

// Top-level elements of a behavior document: either the document's own
// children or, when wrapped, the children of <behavior_model>.
const pt::ptree& behavior_top(const pt::ptree& doc)
{
  if (doc.size() == 1 && doc.begin()->first == "behavior_model")
    return doc.begin()->second;
  return doc;
}

// Replaces `${name}` outside of comments. Throws on unknown names.
std::string substitute_defines(std::string_view text,
                               const std::map<std::string, std::string>& defines)
{
  std::string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    if (text.compare(i, 4, "<!--") == 0) {
      const size_t end = text.find("-->", i + 4);
      const size_t stop = end == std::string_view::npos ? text.size() : end + 3;
      out.append(text.substr(i, stop - i));
      i = stop;
    } else if (text.compare(i, 2, "${") == 0) {
      const size_t close = text.find('}', i + 2);
      if (close == std::string_view::npos)
        throw ParseError("unterminated ${ reference");
      const std::string name(text.substr(i + 2, close - i - 2));
      auto it = defines.find(name);
      if (it == defines.end())
        throw ParseError("unresolved ${" + name + "}");
      out += xml_escape(it->second);
      i = close + 1;
    } else {
      out += text[i++];
    }
  }
  return out;
}

struct RawDef
{
  std::string name;
  NodeKind kind;
  std::vector<Connection> configuration;
  BoolExpr condition;
  std::vector<std::string> inhibitions;
  std::vector<std::string> child_refs;
};

class ModelReader
{
public:
  void read_top(const pt::ptree& top)
  {
    for (const auto& [tag, node] : top) {
      if (tag == "define")
        continue;
      if (tag == "behavior" || tag == "meta_behavior")
        read_definition(tag, node);
      else
        throw ParseError("unexpected element <" + tag + "> in behavior description");
    }
  }

  std::vector<BehaviorNode> build_roots()
  {
    std::map<std::string, std::string> referenced_by;
    for (const auto& def : defs_) {
      for (const auto& ref : def.child_refs) {
        if (!index_.count(ref))
          throw ParseError("meta-behavior '" + def.name + "' references unknown behavior '" +
                           ref + "'");
        auto [it, inserted] = referenced_by.emplace(ref, def.name);
        if (!inserted)
          throw ParseError("behavior '" + ref + "' is a child of both '" + it->second +
                           "' and '" + def.name + "'");
      }
    }
    std::vector<BehaviorNode> roots;
    size_t built = 0;
    for (const auto& def : defs_) {
      if (!referenced_by.count(def.name))
        roots.push_back(build(def, built));
    }
    if (built != defs_.size())
      throw ParseError("cyclic meta-behavior containment");
    return roots;
  }

private:
  void read_definition(const std::string& tag, const pt::ptree& node)
  {
    auto name = attribute(node, "name");
    if (!name || name->empty())
      throw ParseError("<" + tag + "> definition without a name");
    if (name->find(',') != std::string::npos)
      throw ParseError("behavior name '" + *name + "' contains a comma");
    if (index_.count(*name))
      throw ParseError("duplicate behavior name '" + *name + "'");

    RawDef def;
    def.name = *name;
    def.kind = tag == "behavior" ? NodeKind::Behavior : NodeKind::MetaBehavior;
    index_[def.name] = defs_.size();
    defs_.emplace_back();

    std::vector<BoolExpr> conditions;
    const std::string where = "behavior '" + def.name + "'";
    for (const auto& [child_tag, child] : node) {
      if (child_tag == kAttr)
        continue;
      if (child_tag == "config") {
        if (def.kind == NodeKind::MetaBehavior)
          throw ParseError("meta-behavior '" + def.name + "' cannot have <config>");
        auto at = attribute(child, "at");
        if (!at || at->empty())
          throw ParseError(where + ": <config> without 'at' attribute");
        const PortName dest = port_or_throw(*at, where);
        const PortName src = port_or_throw(trim(child.data()), where);
        Connection c;
        try {
          c = Connection::make(src, dest);
        } catch (const std::invalid_argument& e) {
          throw ParseError(where + ": " + e.what());
        }
        if (std::find(def.configuration.begin(), def.configuration.end(), c) !=
            def.configuration.end())
          throw ParseError(where + ": duplicate configuration " + c.str());
        def.configuration.push_back(std::move(c));
      } else if (child_tag == "condition") {
        try {
          BoolExpr e = parse_condition(child.data());
          if (!e.is_true())
            conditions.push_back(std::move(e));
        } catch (const ParseError& e) {
          throw ParseError(where + ": " + e.what());
        }
      } else if (child_tag == "inhibition") {
        std::stringstream ss(child.data());
        std::string item;
        while (std::getline(ss, item, ',')) {
          item = trim(item);
          if (!item.empty())
            def.inhibitions.push_back(item);
        }
      } else if ((child_tag == "behavior" || child_tag == "meta_behavior") &&
                 def.kind == NodeKind::MetaBehavior) {
        if (attribute(child, "name")) {
          def.child_refs.push_back(*attribute(child, "name"));
          read_definition(child_tag, child);
        } else {
          std::string ref = trim(child.data());
          if (ref.empty())
            throw ParseError(where + ": empty <" + child_tag + "> reference");
          def.child_refs.push_back(std::move(ref));
        }
      } else {
        throw ParseError(where + ": unexpected element <" + child_tag + ">");
      }
    }
    if (conditions.size() == 1)
      def.condition = std::move(conditions.front());
    else if (conditions.size() > 1)
      def.condition = BoolExpr::conjunction(std::move(conditions));

    if (def.kind == NodeKind::Behavior && def.configuration.empty())
      throw ParseError(where + " has an empty configuration");
    if (def.kind == NodeKind::MetaBehavior && def.child_refs.empty())
      throw ParseError("meta-behavior '" + def.name + "' has no children");

    defs_[index_[def.name]] = std::move(def);
  }

  BehaviorNode build(const RawDef& def, size_t& built)
  {
    ++built;
    BehaviorNode node;
    node.name = def.name;
    node.kind = def.kind;
    node.configuration = def.configuration;
    node.condition = def.condition;
    node.inhibitions = def.inhibitions;
    for (const auto& ref : def.child_refs)
      node.children.push_back(build(defs_[index_.at(ref)], built));
    return node;
  }

  std::vector<RawDef> defs_;
  std::map<std::string, size_t> index_;
};

void serialize_node(const BehaviorNode& node, std::ostringstream& out)
{
  const bool meta = node.kind == NodeKind::MetaBehavior;
  const char* tag = meta ? "meta_behavior" : "behavior";
  out << "  <" << tag << " name=\"" << xml_escape(node.name) << "\">\n";
  for (const auto& child : node.children) {
    const char* child_tag = child.is_leaf() ? "behavior" : "meta_behavior";
    out << "    <" << child_tag << ">" << xml_escape(child.name) << "</" << child_tag << ">\n";
  }
  for (const auto& c : node.configuration) {
    out << "    <config at=\"" << xml_escape(c.destination.str()) << "\">"
        << xml_escape(c.source.str()) << "</config>\n";
  }
  out << "    <condition>" << (node.condition.is_true() ? "" : xml_escape(render(node.condition)))
      << "</condition>\n";
  if (node.inhibitions.empty())
    out << "    <inhibition></inhibition>\n";
  for (const auto& name : node.inhibitions)
    out << "    <inhibition>" << xml_escape(name) << "</inhibition>\n";
  out << "  </" << tag << ">\n";
  for (const auto& child : node.children)
    serialize_node(child, out);
}

}  // namespace

BehaviorModel parse_behavior_model(std::string_view xml_text)
{
  BehaviorModel model;
  std::map<std::string, std::string> define_map;
  {
    const pt::ptree doc = read_xml_tree(xml_text);
    for (const auto& [tag, node] : behavior_top(doc)) {
      if (tag != "define")
        continue;
      auto name = attribute(node, "name");
      if (!name || name->empty())
        throw ParseError("<define> without a name");
      std::string value = trim(node.data());
      if (!define_map.emplace(*name, value).second)
        throw ParseError("duplicate define '" + *name + "'");
      model.defines.emplace_back(*name, std::move(value));
    }
  }

  const std::string substituted = substitute_defines(xml_text, define_map);
  const pt::ptree doc = read_xml_tree(substituted);
  ModelReader reader;
  reader.read_top(behavior_top(doc));
  model.roots = reader.build_roots();
  return model;
}

std::string serialize_behavior_model(const BehaviorModel& model)
{
  std::ostringstream out;
  out << "<behavior_model>\n";
  for (const auto& [name, value] : model.defines)
    out << "  <define name=\"" << xml_escape(name) << "\">" << xml_escape(value) << "</define>\n";
  for (const auto& root : model.roots)
    serialize_node(root, out);
  out << "</behavior_model>\n";
  return out.str();
}

NetworkDescription parse_network(std::string_view xml_text)
{
  const pt::ptree doc = read_xml_tree(xml_text);
  if (doc.size() != 1 || doc.begin()->first != "application")
    throw ParseError("application description must have a single <application> root");
  const pt::ptree& app = doc.begin()->second;

  NetworkDescription net;
  net.name = attribute(app, "name").value_or("");
  std::map<PortName, std::string> owner;

  for (const auto& [tag, node] : app) {
    if (tag == kAttr)
      continue;
    if (tag == "module") {
      Component comp;
      comp.name = attribute(node, "name").value_or("");
      if (comp.name.empty())
        throw ParseError("<module> without a name");
      const std::string where = "module '" + comp.name + "'";
      for (const auto& [port_tag, port_node] : node) {
        if (port_tag == kAttr)
          continue;
        if (port_tag != "input" && port_tag != "output")
          throw ParseError(where + ": unexpected element <" + port_tag + ">");
        PortName p = port_or_throw(trim(port_node.data()), where);
        const bool want_input = port_tag == "input";
        if (p.is_input() != want_input)
          throw ParseError(where + ": port '" + p.str() + "' declared as <" + port_tag +
                           "> has the wrong direction suffix");
        auto [it, inserted] = owner.emplace(p, comp.name);
        if (!inserted)
          throw ParseError("port '" + p.str() + "' declared by both '" + it->second + "' and '" +
                           comp.name + "'");
        (want_input ? comp.inputs : comp.outputs).push_back(std::move(p));
      }
      net.components.push_back(std::move(comp));
    } else if (tag == "connection") {
      auto from = attribute(node, "from");
      auto to = attribute(node, "to");
      if (!from || !to)
        throw ParseError("<connection> requires 'from' and 'to' attributes");
      const PortName src = port_or_throw(*from, "connection");
      const PortName dst = port_or_throw(*to, "connection");
      if (!net.declares_output(src))
        throw ParseError("connection references undeclared output port '" + src.str() + "'");
      if (!net.declares_input(dst))
        throw ParseError("connection references undeclared input port '" + dst.str() + "'");
      const Connection c{src, dst};
      if (net.has_connection(c))
        throw ParseError("duplicate connection " + c.str());
      if (auto window = attribute(node, "window")) {
        int64_t ms = 0;
        auto [ptr, ec] = std::from_chars(window->data(), window->data() + window->size(), ms);
        if (ec != std::errc() || ptr != window->data() + window->size() || ms <= 0)
          throw ParseError("connection " + c.str() + ": invalid window '" + *window + "'");
        auto [it, inserted] = net.window_overrides.emplace(dst, ms);
        if (!inserted && it->second != ms)
          throw ParseError("conflicting activation windows for port '" + dst.str() + "'");
      }
      net.connections.push_back(c);
    } else {
      throw ParseError("unexpected element <" + tag + "> in application description");
    }
  }
  return net;
}

bool NetworkDescription::has_connection(const Connection& c) const
{
  return std::find(connections.begin(), connections.end(), c) != connections.end();
}

bool NetworkDescription::declares_output(const PortName& p) const
{
  return std::any_of(components.begin(), components.end(), [&](const Component& c) {
    return std::find(c.outputs.begin(), c.outputs.end(), p) != c.outputs.end();
  });
}

bool NetworkDescription::declares_input(const PortName& p) const
{
  return std::any_of(components.begin(), components.end(), [&](const Component& c) {
    return std::find(c.inputs.begin(), c.inputs.end(), p) != c.inputs.end();
  });
}

int64_t NetworkDescription::window_ms(const PortName& destination) const
{
  auto it = window_overrides.find(destination);
  return it == window_overrides.end() ? kDefaultWindowMs : it->second;
}

std::vector<Connection> NetworkDescription::incoming(const PortName& port) const
{
  std::vector<Connection> out;
  for (const auto& c : connections)
    if (c.destination == port)
      out.push_back(c);
  return out;
}

std::vector<Connection> NetworkDescription::outgoing(const PortName& port) const
{
  std::vector<Connection> out;
  for (const auto& c : connections)
    if (c.source == port)
      out.push_back(c);
  std::sort(out.begin(), out.end(),
            [](const Connection& a, const Connection& b) { return a.destination < b.destination; });
  return out;
}

std::vector<PortName> NetworkDescription::destination_ports() const
{
  std::set<PortName> ports;
  for (const auto& c : connections)
    ports.insert(c.destination);
  return {ports.begin(), ports.end()};
}

std::string Diagnostic::str() const
{
  std::string out = is_error() ? "error " : "warning ";
  out += code;
  if (!location.empty())
    out += " [" + location + "]";
  out += ": " + message;
  return out;
}

Hierarchy::Hierarchy(const BehaviorModel& model) : model_(&model)
{
  auto visit = [this](auto&& self, const BehaviorNode& node, const BehaviorNode* parent) -> void {
    by_name_[node.name] = &node;
    parent_of_[node.name] = parent;
    for (const auto& child : node.children)
      self(self, child, &node);
  };
  for (const auto& root : model.roots)
    visit(visit, root, nullptr);
}

const BehaviorNode* Hierarchy::find(const std::string& name) const
{
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

const BehaviorNode* Hierarchy::parent(const std::string& name) const
{
  auto it = parent_of_.find(name);
  return it == parent_of_.end() ? nullptr : it->second;
}

std::vector<const BehaviorNode*> Hierarchy::ancestors(const std::string& name) const
{
  std::vector<const BehaviorNode*> out;
  for (const BehaviorNode* p = parent(name); p != nullptr; p = parent(p->name))
    out.push_back(p);
  return out;
}

std::vector<const BehaviorNode*> Hierarchy::siblings(const std::string& name) const
{
  std::vector<const BehaviorNode*> out;
  const BehaviorNode* p = parent(name);
  if (p != nullptr) {
    for (const auto& c : p->children)
      if (c.name != name)
        out.push_back(&c);
  } else if (find(name) != nullptr) {
    for (const auto& r : model_->roots)
      if (r.name != name)
        out.push_back(&r);
  }
  return out;
}

std::vector<const BehaviorNode*> Hierarchy::leaves(const BehaviorNode& node)
{
  std::vector<const BehaviorNode*> out;
  auto visit = [&out](auto&& self, const BehaviorNode& n) -> void {
    if (n.is_leaf()) {
      out.push_back(&n);
      return;
    }
    for (const auto& c : n.children)
      self(self, c);
  };
  visit(visit, node);
  return out;
}

std::vector<const BehaviorNode*> Hierarchy::all_leaves() const
{
  std::vector<const BehaviorNode*> out;
  for (const auto& root : model_->roots) {
    auto l = leaves(root);
    out.insert(out.end(), l.begin(), l.end());
  }
  return out;
}

}  // namespace portarb
