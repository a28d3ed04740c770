#pragma once

#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mlat/instances.hpp"
#include "mlat/io.hpp"

namespace mlat {

/// Exit statuses of every command.
enum Exit : int { kPass = 0, kValidationFailure = 1, kInputError = 2, kFalsified = 3 };

/// Outcome of one command: exit status, the machine-readable document and its text rendering.
struct CommandResult {
  int exit = kPass;
  Json doc = Json::object();
  std::string text;
};

struct CommandOptions {
  bool q = false;
  std::optional<std::size_t> max_size;
  std::optional<std::filesystem::path> out;
  std::size_t jobs = 1;
  bool inject_bug = false;
};

namespace wb {

/// Collects the document and the text lines side by side.
class Report {
 public:
  explicit Report(const std::string& command) { doc_["command"] = command; }

  Json& doc() { return doc_; }
  void line(const std::string& s) { text_ += s + "\n"; }
  void check(Json& into, const std::string& name, const Check& c) {
    Json j{{"name", name}, {"holds", c.holds}};
    if (c.vacuous) j["vacuous"] = true;
    if (!c.holds) {
      j["witness"] = c.witness;
      j["detail"] = c.detail;
    }
    into.push_back(j);
    std::string status = c.vacuous ? "pass (" + c.detail + ")" : c.holds ? "pass" : "FAIL  " + c.detail;
    line("  " + name + std::string(name.size() < 26 ? 26 - name.size() : 1, ' ') + status);
  }
  CommandResult finish(int exit) {
    doc_["exit"] = exit;
    return {exit, doc_, text_};
  }

 private:
  Json doc_;
  std::string text_;
};

inline std::string names_of(const FinitePoset& p, Mask s) {
  std::string out = "{";
  bool first = true;
  bits::for_each(s, [&](std::size_t a) {
    out += (first ? "" : ",") + p.name(a);
    first = false;
  });
  return out + "}";
}

inline Json blocks_json(const FinitePoset& p, const EquivRelation& e) {
  Json a = Json::array();
  for (Mask b : e.blocks()) {
    Json block = Json::array();
    bits::for_each(b, [&](std::size_t x) { block.push_back(p.name(x)); });
    a.push_back(block);
  }
  return a;
}

inline std::string blocks_text(const FinitePoset& p, const EquivRelation& e) {
  std::string s;
  for (Mask b : e.blocks()) s += names_of(p, b);
  return s;
}

/// Lattice part of the check. Fills the report and returns false when the order is not a
/// bounded distributive lattice.
inline bool lattice_part(Report& r, const DistLattice& l) {
  auto rep = validate_lattice(l);
  auto& checks = r.doc()["lattice"] = Json::array();
  r.line("lattice (" + std::to_string(l.size()) + " elements)" + (rep.sampled ? ", sampled triples" : ""));
  for (auto& [name, c] : rep.entries()) r.check(checks, name, *c);
  if (rep.sampled) r.doc()["warning"] = "validation sampled random triples";
  return rep.ok();
}

/// Axioms with each failure witness evaluated a second time.
inline bool axioms_part(Report& r, const DistLattice& l, const Operators& ops) {
  auto rep = validate_monadic(l, ops.nabla, ops.delta);
  auto& checks = r.doc()["axioms"] = Json::array();
  r.line("axioms");
  bool reverified = true;
  for (std::size_t k = 0; k < kAxiomCount; ++k) {
    const auto& c = rep.axioms[k];
    r.check(checks, axiom_names()[k], c);
    if (!c.holds) reverified = reverified && witness_violates(k, l, ops.nabla, ops.delta, c.witness);
  }
  r.doc()["witnesses_reverify"] = reverified;
  if (!reverified) throw InvariantViolation("an axiom witness does not violate its axiom");
  return rep.ok();
}

struct LoadedLattice {
  DistLattice lattice;
  Operators ops;
  bool ops_given = false;
};

/// Parses a lattice document and validates it. Returns nullopt with the report filled when
/// validation fails. A document without operators gets the identity pair.
inline std::optional<LoadedLattice> load_monadic(Report& r, const LatticeDoc& d, bool check_axioms = true) {
  auto given = to_operators(d);
  auto l = to_lattice(d);
  if (!lattice_part(r, l)) return std::nullopt;
  LoadedLattice out{l, given ? *given : identity_pair(l), given.has_value()};
  if (!given) r.line("no operators given, using the identity pair");
  r.doc()["operators_given"] = out.ops_given;
  if (check_axioms && !axioms_part(r, l, out.ops)) return std::nullopt;
  return out;
}

inline void space_flags(Report& r, const FrameReport& rep) {
  auto& checks = r.doc()["conditions"] = Json::array();
  for (auto& [name, c] : rep.entries()) r.check(checks, name, *c);
  auto& cc = r.doc()["cross_checks"] = Json::array();
  for (auto& c : rep.cross_checks) r.check(cc, c.name, c.check);
  r.doc()["flags"] = {{"q_space", rep.is_q_space},
                      {"mq_space", rep.is_mq_space},
                      {"mk_frame", rep.is_mk_frame},
                      {"paK_frame", rep.is_paK_frame}};
  r.line(std::string("q-space ") + (rep.is_q_space ? "yes" : "no") + ", mq-space " + (rep.is_mq_space ? "yes" : "no") +
         ", mk-frame " + (rep.is_mk_frame ? "yes" : "no") + ", paK-frame " + (rep.is_paK_frame ? "yes" : "no"));
}

inline void map_flags(Report& r, const MapReport& rep) {
  auto& checks = r.doc()["conditions"] = Json::array();
  for (auto& [name, c] : rep.entries()) r.check(checks, name, *c);
  auto& cc = r.doc()["cross_checks"] = Json::array();
  for (auto& c : rep.cross_checks) r.check(cc, c.name, c.check);
  r.doc()["flags"] = {{"q_function", rep.is_q_function},
                      {"mq_function", rep.is_mq_function},
                      {"mk_function", rep.is_mk_function},
                      {"paK_function", rep.is_paK_function}};
  r.line(std::string("q-function ") + (rep.is_q_function ? "yes" : "no") + ", mq-function " +
         (rep.is_mq_function ? "yes" : "no") + ", mk-function " + (rep.is_mk_function ? "yes" : "no") +
         ", paK-function " + (rep.is_paK_function ? "yes" : "no"));
}

/// Checks the space and fills the report; false when it is not an mq-space.
inline bool space_part(Report& r, const MqSpace& x) {
  r.line("space (" + std::to_string(x.size()) + " points)");
  auto rep = check_space(x);
  space_flags(r, rep);
  return rep.is_mq_space;
}

inline std::size_t congruence_cap(Report& r, const CommandOptions& o) {
  if (!o.max_size) return kCongruenceCap;
  if (*o.max_size > kCongruenceCap) {
    r.doc()["warning"] = "congruence cap raised above " + std::to_string(kCongruenceCap) + " elements";
    r.line("warning: congruence cap raised to " + std::to_string(*o.max_size));
  }
  return *o.max_size;
}

inline Json classification_json(const Classification& c) {
  Json j{{"verdict", to_string(c.verdict)},
         {"branch", to_string(c.branch)},
         {"congruences", c.congruence_count},
         {"routes",
          {{"congruence_count", to_string(c.by_congruences)},
           {"simple_by_space", c.simple_by_space},
           {"simple_by_algebra", c.simple_by_algebra},
           {"si_by_branches", c.si_by_branches},
           {"si_by_max_closures", c.si_by_max_closures}}},
         {"agree", c.agree()},
         {"disagreements", c.disagreements}};
  if (c.si_by_simple_pair) j["routes"]["si_by_simple_pair"] = *c.si_by_simple_pair;
  if (c.branch == Branch::ExceptionalPoint) j["witness"] = {{"point", c.space.name(c.point)}};
  if (c.branch == Branch::LastQuantifierImage) j["witness"] = {{"last_image", names_of(c.space.poset, c.last_image)}};
  return j;
}

inline CommandResult failure(Report& r, int exit, const std::string& kind, const std::string& msg) {
  r.doc()["error"] = {{"kind", kind}, {"message", msg}};
  r.line(kind + ": " + msg);
  return r.finish(exit);
}

}  // namespace wb

inline CommandResult cmd_check(const std::filesystem::path& file, const CommandOptions& = {}) {
  wb::Report r("check");
  r.doc()["file"] = file.string();
  auto doc = load_document(file);
  if (auto* d = std::get_if<LatticeDoc>(&doc)) {
    r.doc()["kind"] = "lattice";
    auto given = to_operators(*d);
    auto l = to_lattice(*d);
    bool ok = wb::lattice_part(r, l);
    if (ok && given) ok = wb::axioms_part(r, l, *given);
    r.line(ok ? "valid" : "invalid");
    return r.finish(ok ? kPass : kValidationFailure);
  }
  if (auto* d = std::get_if<SpaceDoc>(&doc)) {
    r.doc()["kind"] = "space";
    bool ok = wb::space_part(r, to_space(*d));
    return r.finish(ok ? kPass : kValidationFailure);
  }
  r.doc()["kind"] = "map";
  auto f = to_map(std::get<MapDoc>(doc), file);
  for (auto [end, x] : {std::pair{"source", f.source}, std::pair{"target", f.target}})
    if (!is_mq_space(*x)) return wb::failure(r, kValidationFailure, "invalid-end", std::string(end) + " is not an mq-space");
  auto rep = check_map(f);
  wb::map_flags(r, rep);
  return r.finish(rep.is_mq_function ? kPass : kValidationFailure);
}

inline CommandResult cmd_dualize(const std::filesystem::path& file, const CommandOptions& o = {}) {
  wb::Report r("dualize");
  r.doc()["file"] = file.string();
  auto doc = load_document(file);
  StructureDoc result;
  if (auto* d = std::get_if<LatticeDoc>(&doc)) {
    r.doc()["direction"] = "lattice-to-space";
    auto m = wb::load_monadic(r, *d);
    if (!m) return wb::failure(r, kValidationFailure, "invalid-input", "not a monadic lattice, nothing written");
    MonadicLattice ml{m->lattice, m->ops.nabla, m->ops.delta};
    auto x = spectrum(ml);
    auto h = sigma_iso(ml);
    auto hr = check_hom(h);
    bool iso = hr.is_monadic_hom() && hr.is_bijective;
    r.doc()["sigma"] = {{"monadic_hom", hr.is_monadic_hom()}, {"bijective", hr.is_bijective}, {"isomorphism", iso}};
    r.line(std::string("sigma: ") + (iso ? "isomorphism onto the dual algebra of the spectrum" : "NOT an isomorphism"));
    if (!iso) throw InvariantViolation("sigma is not an isomorphism");
    result = space_doc(x);
  } else if (auto* d = std::get_if<SpaceDoc>(&doc)) {
    r.doc()["direction"] = "space-to-lattice";
    auto x = to_space(*d);
    if (!wb::space_part(r, x)) return wb::failure(r, kValidationFailure, "invalid-input", "not an mq-space, nothing written");
    auto m = dual_algebra(x);
    epsilon_iso(x);  // throws unless an order isomorphism matching the equivalences
    r.doc()["epsilon"] = {{"isomorphism", true}};
    r.line("epsilon: isomorphism onto the spectrum of the dual algebra");
    result = lattice_doc(m.lattice, m.operators());
  } else {
    return wb::failure(r, kInputError, "unsupported", "maps are not dualized by this command");
  }
  if (o.out) {
    write_document(*o.out, result);
    r.doc()["out"] = o.out->string();
    r.line("wrote " + o.out->string());
  } else {
    r.doc()["result"] = to_json(result);
    r.line(serialize(result));
  }
  return r.finish(kPass);
}

inline CommandResult cmd_classify(const std::filesystem::path& file, const CommandOptions& o = {}) {
  wb::Report r("classify");
  r.doc()["file"] = file.string();
  auto cap = wb::congruence_cap(r, o);
  auto doc = load_document(file);
  Classification c;
  if (auto* d = std::get_if<LatticeDoc>(&doc)) {
    auto m = wb::load_monadic(r, *d);
    if (!m) return wb::failure(r, kValidationFailure, "invalid-input", "not a monadic lattice");
    c = evaluate_classification(MonadicLattice{m->lattice, m->ops.nabla, m->ops.delta}, cap);
  } else if (auto* d = std::get_if<SpaceDoc>(&doc)) {
    auto x = to_space(*d);
    if (!wb::space_part(r, x)) return wb::failure(r, kValidationFailure, "invalid-input", "not an mq-space");
    c = evaluate_classification(x, cap);
  } else {
    return wb::failure(r, kInputError, "unsupported", "maps are not classified");
  }
  bool witness_ok = verify_witness(c.space, c);
  r.doc()["classification"] = wb::classification_json(c);
  r.doc()["classification"]["witness_reverifies"] = witness_ok;
  std::string v = to_string(c.verdict);
  if (c.branch == Branch::ExceptionalPoint) v += " (exceptional-point, point " + c.space.name(c.point) + ")";
  if (c.branch == Branch::LastQuantifierImage)
    v += " (last-quantifier-image, " + wb::names_of(c.space.poset, c.last_image) + ")";
  r.line("verdict " + v);
  r.line("congruences " + std::to_string(c.congruence_count));
  if (!c.agree() || !witness_ok) {
    for (auto& s : c.disagreements) r.line("  disagreement: " + s);
    if (!witness_ok) r.line("  stored witness does not re-verify");
    return wb::failure(r, kFalsified, "falsification", "classification routes disagree");
  }
  r.line("all routes agree");
  return r.finish(kPass);
}

inline CommandResult cmd_congruences(const std::filesystem::path& file, const CommandOptions& o = {}) {
  wb::Report r("congruences");
  r.doc()["file"] = file.string();
  r.doc()["quantifier_only"] = o.q;
  auto cap = wb::congruence_cap(r, o);
  auto doc = load_document(file);
  std::optional<MonadicLattice> m;
  if (auto* d = std::get_if<LatticeDoc>(&doc)) {
    auto lm = wb::load_monadic(r, *d, !o.q);
    if (!lm) return wb::failure(r, kValidationFailure, "invalid-input", "not a monadic lattice");
    m = MonadicLattice{lm->lattice, lm->ops.nabla, lm->ops.delta};
  } else if (auto* d = std::get_if<SpaceDoc>(&doc)) {
    auto x = to_space(*d);
    if (!wb::space_part(r, x)) return wb::failure(r, kValidationFailure, "invalid-input", "not an mq-space");
    m = dual_algebra(x);
  } else {
    return wb::failure(r, kInputError, "unsupported", "maps have no congruences");
  }
  if (o.q && !validate_quantifier(m->lattice, m->nabla).quantifier_ok())
    return wb::failure(r, kValidationFailure, "invalid-input", "nabla is not a quantifier");
  auto t = o.q ? q_congruence_table(m->lattice, m->nabla, cap) : con_m_table(*m, cap);
  const auto& sp = t.space.poset;
  const auto& lp = m->lattice.order();
  r.line(std::string(o.q ? "i-saturated" : "id-saturated") + " sets " + std::to_string(t.sets.size()) + ", congruences " +
         std::to_string(t.congruences.size()));
  Json rows = Json::array();
  for (std::size_t i = 0; i < t.sets.size(); ++i) {
    rows.push_back({{"set", wb::names_of(sp, t.sets[i])}, {"congruence", wb::blocks_json(lp, t.congruences[i])}});
    r.line("  " + wb::names_of(sp, t.sets[i]) + "  ->  " + wb::blocks_text(lp, t.congruences[i]));
  }
  r.doc()["spectrum"] = to_json(space_doc(t.space));
  r.doc()["family"] = rows;
  r.doc()["saturated_sets"] = t.sets.size();
  r.doc()["congruence_count"] = t.congruences.size();
  r.doc()["order_reversing_bijection"] = true;  // con_m_table and q_congruence_table throw otherwise
  r.line("order-reversing bijection verified against the partition search");
  return r.finish(kPass);
}

inline CommandResult cmd_enumerate(std::size_t n, const std::string& kind, const CommandOptions& o = {}) {
  wb::Report r("enumerate");
  r.doc()["n"] = n;
  r.doc()["kind"] = kind;
  Json entries = Json::array();
  std::map<std::string, std::size_t> tally{{"Simple", 0}, {"SINotSimple", 0}, {"Neither", 0}};
  if (kind == "spaces") {
    std::size_t cap = o.max_size.value_or(5);
    std::size_t mq = 0, mk = 0, pak = 0;
    for (auto& e : enumerate_spaces(n, cap)) {
      Json j{{"space", describe(e.space)},
             {"q_space", e.report.is_q_space},
             {"mq_space", e.report.is_mq_space},
             {"mk_frame", e.report.is_mk_frame},
             {"paK_frame", e.report.is_paK_frame}};
      std::string line = describe(e.space) + "  mq " + (e.report.is_mq_space ? "yes" : "no");
      mq += e.report.is_mq_space;
      mk += e.report.is_mk_frame;
      pak += e.report.is_paK_frame;
      if (e.report.is_mq_space) {
        auto c = evaluate_classification(e.space, kInstanceCongruenceCap);
        if (!c.agree()) throw InvariantViolation("classification routes disagree on " + describe(e.space));
        j["verdict"] = to_string(c.verdict);
        ++tally[to_string(c.verdict)];
        line += "  " + to_string(c.verdict);
      }
      entries.push_back(j);
      r.line(line);
    }
    r.doc()["counts"] = {{"entries", entries.size()}, {"mq_space", mq}, {"mk_frame", mk}, {"paK_frame", pak}};
    r.line(std::to_string(entries.size()) + " entries, " + std::to_string(mq) + " mq-spaces, " + std::to_string(mk) +
           " mk-frames, " + std::to_string(pak) + " paK-frames");
  } else if (kind == "lattices") {
    if (n > 5) throw ResourceError("lattice enumeration is capped at posets of 5 points");
    for_each_labeled_poset(n, [&](const FinitePoset& p) {
      for (auto& m : enumerate_monadic(up_set_lattice(p))) {
        auto c = evaluate_classification(m, kInstanceCongruenceCap);
        if (!c.agree()) throw InvariantViolation("classification routes disagree on " + describe(m));
        entries.push_back({{"lattice", describe(m)}, {"verdict", to_string(c.verdict)}, {"congruences", c.congruence_count}});
        ++tally[to_string(c.verdict)];
        r.line(describe(m) + "  " + to_string(c.verdict));
      }
    });
    r.doc()["counts"] = {{"entries", entries.size()}};
    r.line(std::to_string(entries.size()) + " monadic lattices");
  } else {
    return wb::failure(r, kInputError, "usage", "kind must be spaces or lattices");
  }
  r.doc()["verdicts"] = tally;
  r.line("Simple " + std::to_string(tally["Simple"]) + ", SINotSimple " + std::to_string(tally["SINotSimple"]) +
         ", Neither " + std::to_string(tally["Neither"]));
  r.doc()["entries"] = entries;
  return r.finish(kPass);
}

inline CommandResult cmd_verify(std::size_t n, const CommandOptions& o = {}) {
  wb::Report r("verify");
  VerifyOptions vo;
  vo.n = n;
  vo.jobs = o.jobs;
  vo.fault.swap_composition = o.inject_bug;
  auto res = run_verify(vo);
  r.doc()["n"] = n;
  r.doc()["universe"] = {{"spaces", res.space_count}, {"monadic_lattices", res.lattice_count}, {"maps", res.map_count}};
  r.line("universe: " + std::to_string(res.space_count) + " spaces, " + std::to_string(res.lattice_count) +
         " monadic lattices, " + std::to_string(res.map_count) + " maps");
  Json props = Json::array();
  for (auto* s : {&res.spaces, &res.lattices, &res.maps})
    for (auto& t : s->tallies()) {
      Json j{{"name", t.name},
             {"kind", t.observation ? "observation" : "property"},
             {"instances", t.instances},
             {"holds", t.holds}};
      if (t.holds != t.instances) j["first_failure"] = t.first_failure;
      props.push_back(j);
      std::string tag = t.observation ? "observed " : t.failures() ? "FAIL     " : "pass     ";
      r.line(tag + std::to_string(t.holds) + "/" + std::to_string(t.instances) + "  " + t.name);
      if (t.failures()) r.line("         witness: " + t.first_failure);
    }
  r.doc()["properties"] = props;
  r.doc()["falsifications"] = res.falsifications();
  r.line(std::to_string(res.falsifications()) + " falsifications");
  return r.finish(res.falsifications() ? kFalsified : kPass);
}

/// One map file, or every map between two space files when `target` is given.
inline CommandResult cmd_morphism(const std::filesystem::path& file, const std::optional<std::filesystem::path>& target = {},
                                  const CommandOptions& = {}) {
  wb::Report r("morphism");
  if (!target) {
    auto doc = load_document(file);
    auto* d = std::get_if<MapDoc>(&doc);
    if (!d) return wb::failure(r, kInputError, "unsupported", "expected a map document");
    auto f = to_map(*d, file);
    r.doc()["map"] = describe(f);
    r.line(describe(f));
    for (auto [end, x] : {std::pair{"source", f.source}, std::pair{"target", f.target}})
      if (!is_mq_space(*x)) return wb::failure(r, kValidationFailure, "invalid-end", std::string(end) + " is not an mq-space");
    auto rep = check_map(f);
    wb::map_flags(r, rep);
    return r.finish(rep.is_mq_function ? kPass : kValidationFailure);
  }
  auto load = [](const std::filesystem::path& p) {
    auto doc = load_document(p);
    auto* s = std::get_if<SpaceDoc>(&doc);
    if (!s) throw ParseError(p.string() + " is not a space document", 0, "kind");
    return to_space(*s);
  };
  auto a = load(file), b = load(*target);
  for (auto [end, x] : {std::pair{"source", &a}, std::pair{"target", &b}})
    if (!is_mq_space(*x)) return wb::failure(r, kValidationFailure, "invalid-end", std::string(end) + " is not an mq-space");
  Json entries = Json::array();
  std::size_t monotone = 0, q = 0, mq = 0, mk = 0, pak = 0;
  for (auto& [f, rep] : enumerate_maps(a, b)) {
    std::string m;
    for (std::size_t i = 0; i < f.map.size(); ++i) m += (i ? "," : "") + a.name(i) + "->" + b.name(f.map[i]);
    entries.push_back({{"map", m},
                       {"monotone", rep.monotone.holds},
                       {"q_function", rep.is_q_function},
                       {"mq_function", rep.is_mq_function},
                       {"mk_function", rep.is_mk_function},
                       {"paK_function", rep.is_paK_function}});
    monotone += rep.monotone.holds;
    q += rep.is_q_function;
    mq += rep.is_mq_function;
    mk += rep.is_mk_function;
    pak += rep.is_paK_function;
    r.line("{" + m + "}  monotone " + (rep.monotone.holds ? "yes" : "no") + ", mq " + (rep.is_mq_function ? "yes" : "no"));
  }
  r.doc()["maps"] = entries;
  r.doc()["counts"] = {{"maps", entries.size()}, {"monotone", monotone}, {"q_function", q},
                       {"mq_function", mq},      {"mk_function", mk},      {"paK_function", pak}};
  r.line(std::to_string(entries.size()) + " maps, " + std::to_string(monotone) + " monotone, " + std::to_string(mq) +
         " mq-functions");
  return r.finish(kPass);
}

/// Runs a command and turns library errors into exit statuses.
template <class F>
CommandResult run_command(const std::string& name, F&& f) {
  wb::Report r(name);
  try {
    return f();
  } catch (const ParseError& e) {
    r.doc()["error"] = {{"kind", "parse"}, {"message", e.what()}, {"line", e.line}, {"field", e.field}};
    r.line(std::string("parse error") + (e.line ? " at line " + std::to_string(e.line) : "") +
           (e.field.empty() ? "" : " in field '" + e.field + "'") + ": " + e.what());
    return r.finish(kInputError);
  } catch (const ResourceError& e) {
    return wb::failure(r, kInputError, "resource", e.what());
  } catch (const StructuralError& e) {
    return wb::failure(r, kValidationFailure, "structural", e.what());
  } catch (const PreconditionError& e) {
    return wb::failure(r, kValidationFailure, "precondition", e.what());
  } catch (const DegenerateInput& e) {
    return wb::failure(r, kValidationFailure, "degenerate", e.what());
  } catch (const InvariantViolation& e) {
    return wb::failure(r, kFalsified, "falsification", e.what());
  }
}

}  // namespace mlat
