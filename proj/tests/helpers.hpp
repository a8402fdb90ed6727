#pragma once

#include "apnv/model.hpp"
#include "apnv/term.hpp"

#include <string>

namespace th {

inline apnv::Term V(const std::string& n) { return apnv::Term::var(n); }
inline apnv::Term F(const std::string& s, std::vector<apnv::Term> args = {}) {
    return apnv::Term::app(s, std::move(args));
}
inline apnv::Term c() { return F("c"); }
inline apnv::Term f(const apnv::Term& x) { return F("f", {x}); }
inline apnv::Term g(const apnv::Term& x) { return F("g", {x}); }

inline std::string fixture(const std::string& name) { return std::string(APNV_FIXTURES) + "/" + name; }

inline const apnv::Model& example1() {
    static const apnv::Model m = apnv::load_model_file(fixture("example1.apn"));
    return m;
}

} // namespace th
