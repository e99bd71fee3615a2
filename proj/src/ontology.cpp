#include "stm/ontology.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "stm/detail/strings.hpp"
#include "stm/error.hpp"

namespace stm {

namespace detail {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

namespace {

constexpr std::string_view kBuiltinAliases = R"(
decision-maker  decision-maker
decisionmaker   decision-maker
president       decision-maker
senator         decision-maker
ceo             decision-maker
director        decision-maker
leader          decision-maker
founder         decision-maker
voter           decision-maker
protestor       decision-maker
individual      decision-maker  individual
representative  representative
spokesman       representative
spokeswoman     representative
spokesperson    representative
advisor         representative
adviser         representative
appointee       representative
lawyer          representative
trustee         representative
member          representative
militia         representative
doctor          representative
advocate        representative
informational   informational
expert          informational
analyst         informational
researcher      informational
scientist       informational
whistle-blower  informational
casual          informational
bystander       informational
family          informational
friend          informational
relative        informational
)";

std::optional<Role> parse_canonical_role(std::string_view text) {
  if (text == "decision-maker") return Role::DecisionMaker;
  if (text == "representative") return Role::Representative;
  if (text == "informational") return Role::Informational;
  return std::nullopt;
}

}  // namespace

AffiliationCategory category(Affiliation a) {
  switch (a) {
    case Affiliation::Actor:
    case Affiliation::Witness:
    case Affiliation::Victim:
      return AffiliationCategory::Individual;
    default:
      return AffiliationCategory::Institutional;
  }
}

std::string_view to_string(Affiliation a) {
  switch (a) {
    case Affiliation::Government: return "government";
    case Affiliation::Corporate: return "corporate";
    case Affiliation::NGO: return "ngo";
    case Affiliation::Academic: return "academic";
    case Affiliation::Group: return "group";
    case Affiliation::Actor: return "actor";
    case Affiliation::Witness: return "witness";
    case Affiliation::Victim: return "victim";
  }
  return "?";
}

std::string_view to_string(Role r) {
  switch (r) {
    case Role::DecisionMaker: return "decision-maker";
    case Role::Representative: return "representative";
    case Role::Informational: return "informational";
  }
  return "?";
}

std::optional<Affiliation> parse_affiliation(std::string_view text) {
  for (auto a : kAllAffiliations)
    if (to_string(a) == text) return a;
  return std::nullopt;
}

std::string format_source_type(Affiliation a, Role r) {
  std::string out(to_string(a));
  out += '-';
  out += to_string(r);
  return out;
}

RoleAliases RoleAliases::builtin() { return parse(kBuiltinAliases, "<builtin>"); }

RoleAliases RoleAliases::load(const std::string& path) { return parse(detail::read_file(path), path); }

RoleAliases RoleAliases::parse(std::string_view text, const std::string& origin) {
  RoleAliases out;
  int line_no = 0;
  for (auto raw : detail::split(text, '\n')) {
    ++line_no;
    auto line = detail::strip_comment(raw);
    if (line.empty()) continue;
    auto fields = detail::split_ws(line);
    auto where = origin + ":" + std::to_string(line_no);
    if (fields.size() < 2 || fields.size() > 3)
      throw ValidationError(where + ": expected 'alias role [institutional|individual]'");
    auto role = parse_canonical_role(detail::to_lower(fields[1]));
    if (!role) throw ValidationError(where + ": unknown role '" + std::string(fields[1]) + "'");
    Entry entry{*role, std::nullopt};
    if (fields.size() == 3) {
      auto cat = detail::to_lower(fields[2]);
      if (cat == "institutional")
        entry.only_for = AffiliationCategory::Institutional;
      else if (cat == "individual")
        entry.only_for = AffiliationCategory::Individual;
      else
        throw ValidationError(where + ": unknown affiliation category '" + cat + "'");
    }
    out.add(detail::to_lower(fields[0]), entry);
  }
  return out;
}

std::optional<Role> RoleAliases::resolve(std::string_view word, Affiliation affiliation) const {
  if (auto r = parse_canonical_role(word)) return r;
  auto [lo, hi] = entries_.equal_range(word);
  for (auto it = lo; it != hi; ++it) {
    const auto& e = it->second;
    if (!e.only_for || *e.only_for == category(affiliation)) return e.role;
  }
  return std::nullopt;
}

LabelSpace::LabelSpace(std::vector<SourceType> members) : members_(std::move(members)) {
  for (std::size_t i = 0; i < members_.size(); ++i) members_[i].index = static_cast<int>(i);
}

LabelSpace LabelSpace::make_default() {
  std::vector<SourceType> members;
  members.reserve(kNumAffiliations * kNumRoles);
  for (auto a : kAllAffiliations)
    for (auto r : kAllRoles) members.push_back({a, r, 0});
  return LabelSpace(std::move(members));
}

namespace {

std::optional<SourceType> parse_cell(std::string_view text, const RoleAliases& aliases) {
  auto label = detail::to_lower(detail::trim(text));
  auto dash = label.find('-');
  if (dash == std::string::npos) return std::nullopt;
  auto affiliation = parse_affiliation(std::string_view(label).substr(0, dash));
  if (!affiliation) return std::nullopt;
  auto role = aliases.resolve(std::string_view(label).substr(dash + 1), *affiliation);
  if (!role) return std::nullopt;
  return SourceType{*affiliation, *role, 0};
}

}  // namespace

LabelSpace LabelSpace::from_labels(const std::vector<std::string>& labels, const RoleAliases& aliases) {
  std::vector<SourceType> members;
  for (const auto& l : labels) {
    auto cell = parse_cell(l, aliases);
    if (!cell) throw ValidationError("unknown source-type label '" + l + "'");
    if (std::any_of(members.begin(), members.end(), [&](const SourceType& m) { return m.same_cell(*cell); }))
      throw ValidationError("duplicate source-type label '" + l + "'");
    members.push_back(*cell);
  }
  if (members.empty()) throw ValidationError("label space is empty");
  return LabelSpace(std::move(members));
}

LabelSpace LabelSpace::parse(std::string_view text, const std::string& origin, const RoleAliases& aliases) {
  std::vector<std::string> labels;
  int line_no = 0;
  for (auto raw : detail::split(text, '\n')) {
    ++line_no;
    auto line = detail::strip_comment(raw);
    if (line.empty()) continue;
    if (!parse_cell(line, aliases))
      throw ValidationError(origin + ":" + std::to_string(line_no) + ": unknown source-type label '" +
                            std::string(line) + "'");
    labels.emplace_back(line);
  }
  try {
    return from_labels(labels, aliases);
  } catch (const ValidationError& e) {
    throw ValidationError(origin + ": " + e.what());
  }
}

LabelSpace LabelSpace::load(const std::string& path, const RoleAliases& aliases) {
  return parse(detail::read_file(path), path, aliases);
}

std::optional<SourceType> LabelSpace::find(Affiliation a, Role r) const {
  for (const auto& m : members_)
    if (m.affiliation == a && m.role == r) return m;
  return std::nullopt;
}

SourceType LabelSpace::parse_label(std::string_view text, const RoleAliases& aliases) const {
  auto cell = parse_cell(text, aliases);
  if (cell)
    if (auto m = find(cell->affiliation, cell->role)) return *m;
  throw ValidationError("unknown source-type label '" + std::string(text) + "'");
}

std::vector<std::string> LabelSpace::labels() const {
  std::vector<std::string> out;
  out.reserve(members_.size());
  for (const auto& m : members_) out.push_back(format_source_type(m));
  return out;
}

LabelSpace LabelSpace::prefix(int n) const {
  if (n < 1 || n > size())
    throw ValidationError("cannot take " + std::to_string(n) + " source-types from a label space of " +
                          std::to_string(size()));
  return LabelSpace(std::vector<SourceType>(members_.begin(), members_.begin() + n));
}

SourceType parse_source_type(std::string_view text, const RoleAliases& aliases) {
  static const LabelSpace space = LabelSpace::make_default();
  return space.parse_label(text, aliases);
}

}  // namespace stm
