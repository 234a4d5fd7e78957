#include "advaug/style_lexicon.hpp"

#include <algorithm>

namespace advaug {

const std::vector<std::string>& tabloid_style_lexicon() {
  static const std::vector<std::string> kTabloid = {
      "shocking",  "unbelievable", "sensational", "outrageous", "explosive", "stunning",
      "scandalous", "dramatic",    "exclusive",   "incredible", "bombshell", "allegedly",
  };
  return kTabloid;
}

const std::vector<std::string>& sober_style_lexicon() {
  static const std::vector<std::string> kSober = {
      "officials", "according", "statement", "spokesperson", "confirmed", "announced",
      "stated",    "documented", "measured", "reviewed",     "verified",  "analysis",
  };
  return kSober;
}

const std::vector<std::string>& filler_lexicon() {
  static const std::vector<std::string> kFiller = {"indeed", "truly", "honestly", "notably"};
  return kFiller;
}

namespace {
bool contains(const std::vector<std::string>& v, const std::string& t) {
  return std::find(v.begin(), v.end(), t) != v.end();
}
}  // namespace

bool is_tabloid_style_token(const std::string& t) { return contains(tabloid_style_lexicon(), t); }
bool is_sober_style_token(const std::string& t) { return contains(sober_style_lexicon(), t); }
bool is_style_token(const std::string& t) {
  return is_tabloid_style_token(t) || is_sober_style_token(t);
}

}  // namespace advaug
