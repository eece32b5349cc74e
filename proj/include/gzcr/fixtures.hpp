#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gzcr/coverings.hpp"
#include "gzcr/parser.hpp"
#include "gzcr/zcr.hpp"

namespace gzcr {

namespace detail {
// Relative path under fixtures/ -> file content; generated at build time.
const std::map<std::string, std::string>& embedded_fixture_table();
}  // namespace detail

class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& source, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

struct Source {
  std::string name;  // file path, or builtin:<relative path>
  std::string text;
  bool embedded = false;
};

// `ref` is a registry key (kdv, kb3, skdv.a4, skdv.a), `builtin:<path>` or
// a file path; relative paths resolve against the referencing source.
Source load_source(const std::string& ref, const Source* from = nullptr);
std::vector<std::string> builtin_fixture_paths();
// Registry key -> builtin path of the system file.
const std::map<std::string, std::string>& system_registry();

using Meta = std::vector<std::pair<std::string, std::string>>;
std::optional<std::string> meta_value(const Meta& meta, const std::string& key);

struct SystemDocument {
  SystemPtr system;
  Meta meta;
};
SystemDocument parse_system(const Source& src);
// Cached by resolved source name.
SystemPtr load_system(const std::string& ref, const Source* from = nullptr);
std::string format_system(const EvolutionarySystem& system, const Meta& meta = {});

struct ZCRDocument {
  std::string system_ref;
  std::vector<Variable> parameters;
  ZCRFamily family;
  SymbolTable symbols;
  Meta meta;
};
ZCRDocument parse_zcr(const Source& src);
ZCRDocument load_zcr(const std::string& ref, const Source* from = nullptr);
std::string format_zcr(const ZCRDocument& doc);

struct MatrixDocument {
  std::vector<Variable> parameters;
  SuperMatrix matrix;
  Meta meta;
};
// `context` supplies jets and parameters of the surrounding family.
MatrixDocument parse_matrix(const Source& src, const SymbolTable& context = {},
                            const EvolutionarySystem* system = nullptr);
MatrixDocument load_matrix(const std::string& ref, const SymbolTable& context = {},
                           const EvolutionarySystem* system = nullptr, const Source* from = nullptr);
std::string format_matrix(const MatrixDocument& doc);

struct CoveringDocument {
  std::string system_ref;
  std::vector<Variable> parameters;
  std::optional<Variable> family;
  std::shared_ptr<const Covering> covering;
  SymbolTable symbols;
  Meta meta;
};
CoveringDocument parse_covering(const Source& src);
CoveringDocument load_covering(const std::string& ref, const Source* from = nullptr);
std::string format_covering(const CoveringDocument& doc);

struct ShadowDocument {
  std::string covering_ref;
  GeneralField field;
  // d(param)/d(lambda) of the family parameter; 1 when absent.
  GradedPoly rate = 1;
  Meta meta;
};
ShadowDocument parse_shadow(const Source& src, const CoveringDocument& covering);
ShadowDocument load_shadow(const std::string& ref, const CoveringDocument& covering, const Source* from = nullptr);
std::string format_shadow(const ShadowDocument& doc, const CoveringDocument& covering);

}  // namespace gzcr
