#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stm {

enum class Affiliation { Government, Corporate, NGO, Academic, Group, Actor, Witness, Victim };
enum class Role { DecisionMaker, Representative, Informational };
enum class AffiliationCategory { Institutional, Individual };

inline constexpr int kNumAffiliations = 8;
inline constexpr int kNumRoles = 3;

inline constexpr std::array<Affiliation, kNumAffiliations> kAllAffiliations = {
    Affiliation::Government, Affiliation::Corporate, Affiliation::NGO,     Affiliation::Academic,
    Affiliation::Group,      Affiliation::Actor,     Affiliation::Witness, Affiliation::Victim};
inline constexpr std::array<Role, kNumRoles> kAllRoles = {Role::DecisionMaker, Role::Representative,
                                                          Role::Informational};

AffiliationCategory category(Affiliation a);
std::string_view to_string(Affiliation a);
std::string_view to_string(Role r);
std::optional<Affiliation> parse_affiliation(std::string_view text);

struct SourceType {
  Affiliation affiliation = Affiliation::Government;
  Role role = Role::DecisionMaker;
  int index = 0;

  /// Identity is the (affiliation, role) cell; index is a position inside one LabelSpace.
  bool same_cell(const SourceType& other) const {
    return affiliation == other.affiliation && role == other.role;
  }
  friend bool operator==(const SourceType&, const SourceType&) = default;
};

/// Canonical hyphenated label, e.g. "government-decision-maker".
std::string format_source_type(Affiliation a, Role r);
inline std::string format_source_type(const SourceType& s) {
  return format_source_type(s.affiliation, s.role);
}

/// Maps role words used in reporting ("spokesman", "expert", ...) onto canonical roles.
/// An alias may be restricted to one affiliation category ("individual" only means
/// DecisionMaker under Actor/Witness/Victim).
class RoleAliases {
 public:
  struct Entry {
    Role role;
    std::optional<AffiliationCategory> only_for;
  };

  static RoleAliases builtin();
  /// Lines: `alias role [institutional|individual]`, `#` comments.
  static RoleAliases load(const std::string& path);
  static RoleAliases parse(std::string_view text, const std::string& origin);

  std::optional<Role> resolve(std::string_view word, Affiliation affiliation) const;
  void add(std::string alias, Entry entry) { entries_.emplace(std::move(alias), entry); }

 private:
  std::multimap<std::string, Entry, std::less<>> entries_;
};

class LabelSpace {
 public:
  /// The 8 x 3 affiliation/role grid, affiliation-major.
  static LabelSpace make_default();
  /// One `affiliation-role` per line, `#` comments allowed.
  static LabelSpace load(const std::string& path, const RoleAliases& aliases = RoleAliases::builtin());
  static LabelSpace parse(std::string_view text, const std::string& origin,
                          const RoleAliases& aliases = RoleAliases::builtin());
  static LabelSpace from_labels(const std::vector<std::string>& labels,
                                const RoleAliases& aliases = RoleAliases::builtin());

  int size() const { return static_cast<int>(members_.size()); }
  const std::vector<SourceType>& members() const { return members_; }
  const SourceType& operator[](int i) const { return members_.at(static_cast<std::size_t>(i)); }

  std::optional<SourceType> find(Affiliation a, Role r) const;
  /// Throws ValidationError("unknown source-type label ...") for anything outside the space.
  SourceType parse_label(std::string_view text, const RoleAliases& aliases = RoleAliases::builtin()) const;
  std::string label(int index) const { return format_source_type((*this)[index]); }
  std::vector<std::string> labels() const;

  /// First `n` members, keeping their indices.
  LabelSpace prefix(int n) const;

  friend bool operator==(const LabelSpace&, const LabelSpace&) = default;

 private:
  explicit LabelSpace(std::vector<SourceType> members);
  std::vector<SourceType> members_;
};

/// Parses against the default label space.
SourceType parse_source_type(std::string_view text, const RoleAliases& aliases = RoleAliases::builtin());

}  // namespace stm
