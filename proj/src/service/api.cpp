#include "kacres/api.hpp"

#include <algorithm>

#include "kacres/errors.hpp"

namespace kacres::service {

OutputFormat parse_output_format(std::string_view text)
{
    if (text == "json")
        return OutputFormat::Json;
    if (text == "table")
        return OutputFormat::Table;
    if (text == "ascii")
        return OutputFormat::Ascii;
    throw ParseError("unknown output format '" + std::string(text) + "'");
}

ErrorClass classify_current_exception()
{
    try {
        throw;
    } catch (const CapExceeded&) {
        return {413, 3, "degree_cap_exceeded"};
    } catch (const ParseError&) {
        return {400, 2, "malformed_request"};
    } catch (const nlohmann::json::exception&) {
        return {400, 2, "malformed_request"};
    } catch (const PreconditionError&) {
        return {422, 2, "invariant_violation"};
    } catch (const DomainError&) {
        return {422, 2, "invariant_violation"};
    } catch (const OverflowError&) {
        return {500, 4, "overflow"};
    } catch (const InternalError&) {
        return {500, 4, "internal_error"};
    } catch (...) {
        return {500, 4, "internal_error"};
    }
}

Json error_body(const ErrorClass& c, const std::string& message)
{
    return Json{{"schema_version", kSchemaVersion}, {"error", {{"kind", c.kind}, {"message", message}}}};
}

// ---------------------------------------------------------------------------

Json to_json(const WeightDiagram& d)
{
    Json out = Json::array();
    for (Coord a : d.dots())
        out.push_back(a);
    return out;
}

Json to_json(const RunComposition& pi)
{
    return Json(pi.parts);
}

Json to_json(const MoveRecord& m)
{
    Json out{{"kind", to_string(m.kind)}, {"j", m.j}};
    if (m.k)
        out["k"] = *m.k;
    return out;
}

Json to_json(const AllowableFunction& f)
{
    Json trace = Json::array();
    for (const auto& m : f.trace())
        trace.push_back(to_json(m));
    const auto len = ell(f.target(), f.source());
    const auto crossings = leapfrog_count(f);
    Json out{{"source", to_json(f.source())},
             {"target", to_json(f.target())},
             {"pairing", f.pairing()},
             {"trace", std::move(trace)},
             {"ell", len},
             {"leapfrogs", crossings}};
    out["degree"] = len % 2 == 0 ? Json(len / 2 - crossings) : Json(nullptr);
    return out;
}

Json to_json(const Resolution& r)
{
    Json terms = Json::array();
    for (const auto& t : r.terms) {
        Json summands = Json::array();
        for (const auto& [lam, m] : t.summands)
            summands.push_back({{"lambda", to_json(lam)}, {"multiplicity", m}});
        terms.push_back({{"degree", t.degree}, {"count", t.total()}, {"summands", std::move(summands)}});
    }
    return Json{{"mu", to_json(r.mu)},
                {"max_degree", r.max_degree},
                {"counts", summand_counts(r)},
                {"terms", std::move(terms)}};
}

Json to_json(const IntPolynomial& p)
{
    return Json{{"coeffs", p.coeffs()}};
}

Json to_json(const TruncatedSeries& s)
{
    return Json{{"coeffs", s.coeffs}, {"truncation", s.truncation}};
}

Json to_json(const StepPlan& plan)
{
    struct Visitor {
        Json operator()(const TypicalStep&) const { return Json{{"variant", "typical"}}; }
        Json operator()(const Step2a& s) const
        {
            return Json{{"variant", "2a"},
                        {"i", s.i},
                        {"j", s.j},
                        {"nu", to_json(s.nu)},
                        {"mu_prime", to_json(s.mu_prime)}};
        }
        Json operator()(const Step2b& s) const
        {
            return Json{{"variant", "2b"}, {"i", s.i}, {"j", s.j}, {"nu", to_json(s.nu)}};
        }
    };
    Json out = std::visit(Visitor{}, plan);
    out["description"] = describe(plan);
    return out;
}

namespace {

const Json& field(const Json& obj, const char* name)
{
    if (!obj.is_object())
        throw ParseError("request body must be a JSON object");
    auto it = obj.find(name);
    if (it == obj.end())
        throw ParseError(std::string("missing field '") + name + "'");
    return *it;
}

const Json* optional_field(const Json& obj, const char* name)
{
    if (!obj.is_object())
        throw ParseError("request body must be a JSON object");
    auto it = obj.find(name);
    if (it == obj.end() || it->is_null())
        return nullptr;
    return &*it;
}

std::int64_t as_int(const Json& j, const char* what)
{
    if (!j.is_number_integer())
        throw ParseError(std::string(what) + " must be an integer");
    return j.get<std::int64_t>();
}

std::vector<Coord> int_list(const Json& j, const char* what)
{
    if (!j.is_array())
        throw ParseError(std::string(what) + " must be an array of integers");
    std::vector<Coord> out;
    for (const auto& v : j)
        out.push_back(as_int(v, what));
    return out;
}

Json with_schema(Json body)
{
    Json out{{"schema_version", kSchemaVersion}};
    for (auto it = body.begin(); it != body.end(); ++it)
        out[it.key()] = std::move(it.value());
    return out;
}

} // namespace

WeightDiagram diagram_from_json(const Json& j)
{
    if (j.is_string())
        return parse_diagram(j.get<std::string>());
    auto dots = int_list(j, "diagram");
    if (dots.empty())
        throw ParseError("diagram: n >= 1 required");
    for (std::size_t i = 1; i < dots.size(); ++i) {
        if (dots[i - 1] >= dots[i])
            throw ParseError("diagram: dots must be strictly increasing");
    }
    return WeightDiagram(std::move(dots));
}

RunComposition composition_from_json(const Json& j)
{
    if (j.is_string())
        return parse_composition(j.get<std::string>());
    std::vector<int> parts;
    for (auto v : int_list(j, "runs")) {
        if (v < 1 || v > 1'000'000)
            throw ParseError("runs: parts must be positive integers");
        parts.push_back(static_cast<int>(v));
    }
    if (parts.empty())
        throw ParseError("runs: at least one part required");
    return RunComposition{std::move(parts)};
}

MoveRecord move_from_json(const Json& j)
{
    const auto& kind = field(j, "kind");
    if (!kind.is_string())
        throw ParseError("move kind must be a string");
    MoveRecord m;
    m.kind = parse_move_kind(kind.get<std::string>());
    m.j = as_int(field(j, "j"), "move j");
    if (const Json* k = optional_field(j, "k"))
        m.k = as_int(*k, "move k");
    if (m.kind == MoveKind::Move2 && !m.k)
        throw ParseError("Move2 needs the leaping source dot k");
    if (m.kind != MoveKind::Move2 && m.k)
        throw ParseError("only Move2 takes k");
    return m;
}

AllowableFunction function_from_json(const Json& j)
{
    auto source = diagram_from_json(field(j, "source"));
    auto pairing = int_list(field(j, "pairing"), "pairing");
    std::vector<Coord> images = pairing;
    std::sort(images.begin(), images.end());
    if (std::adjacent_find(images.begin(), images.end()) != images.end())
        throw DomainError("pairing is not injective");
    WeightDiagram target = optional_field(j, "target") ? diagram_from_json(field(j, "target"))
                                                       : WeightDiagram(std::move(images));
    std::vector<MoveRecord> trace;
    if (const Json* t = optional_field(j, "trace")) {
        if (!t->is_array())
            throw ParseError("trace must be an array");
        for (const auto& m : *t)
            trace.push_back(move_from_json(m));
    }
    return AllowableFunction(std::move(source), std::move(target), std::move(pairing), std::move(trace));
}

std::string dump(const Json& j)
{
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

Api::Api(JobConfig config, Resolver& resolver)
    : config_(std::move(config))
    , resolver_(resolver)
{
    if (config_.max_degree_cap < 0)
        throw DomainError("max degree cap must be nonnegative");
}

int Api::checked_degree(const Json& value) const
{
    const auto d = as_int(value, "maxDegree");
    if (d < 0)
        throw DomainError("maxDegree must be nonnegative");
    if (d > config_.max_degree_cap)
        throw CapExceeded("maxDegree " + std::to_string(d) + " exceeds the cap " +
                          std::to_string(config_.max_degree_cap));
    return static_cast<int>(d);
}

Json Api::health() const
{
    return Json{{"schema_version", kSchemaVersion}, {"status", "ok"}};
}

Json Api::parse_diagram(const Json& req) const
{
    const auto d = diagram_from_json(field(req, "mu"));
    Json dots = Json::array();
    for (Coord a : d.dots()) {
        const char* cls = is_isolated(d, a) ? "isolated" : is_left_isolated(d, a) ? "left_isolated" : "paired";
        dots.push_back({{"position", a}, {"class", cls}});
    }
    Json dominant = nullptr;
    try {
        auto w = dominant_from_diagram(d);
        dominant = Json(std::vector<Coord>(w.coeffs().begin(), w.coeffs().end()));
    } catch (const OverflowError&) {
    }
    return with_schema({{"mu", to_json(d)},
                        {"n", d.size()},
                        {"runs", to_json(runs(d))},
                        {"atypicality", atypicality(d)},
                        {"odd_runs", odd_run_count(d)},
                        {"dominant", std::move(dominant)},
                        {"dots", std::move(dots)},
                        {"ascii", render_ascii(d)}});
}

Json Api::resolve(const Json& req)
{
    const auto mu = diagram_from_json(field(req, "mu"));
    const int depth = checked_degree(field(req, "maxDegree"));
    return with_schema(to_json(resolver_.resolve(mu, depth)));
}

Json Api::functions(const Json& req)
{
    const auto mu = diagram_from_json(field(req, "mu"));
    std::optional<WeightDiagram> lam;
    if (const Json* l = optional_field(req, "lambda")) {
        lam = diagram_from_json(*l);
        if (lam->size() != mu.size())
            throw DomainError("mu and lambda have different numbers of dots");
    }
    int depth = 0;
    if (const Json* d = optional_field(req, "maxDegree")) {
        depth = checked_degree(*d);
    } else if (lam) {
        // L(f) >= 0, so no function to lambda has degree above ell/2.
        const auto len = ell(*lam, mu);
        depth = checked_degree(Json(std::max<std::int64_t>(0, len / 2)));
    } else {
        throw ParseError("functions needs maxDegree or lambda");
    }

    Json list = Json::array();
    if (!lam || (leq(mu, *lam) && ell(*lam, mu) % 2 == 0)) {
        auto labelled = resolver_.resolve_with_functions(mu, depth);
        for (const auto& term : labelled.terms) {
            for (const auto& f : term.functions) {
                if (!lam || f.target() == *lam)
                    list.push_back(to_json(f));
            }
        }
    }
    const auto count = list.size();
    return with_schema({{"mu", to_json(mu)},
                        {"lambda", lam ? to_json(*lam) : Json(nullptr)},
                        {"max_degree", depth},
                        {"count", count},
                        {"functions", std::move(list)}});
}

Json Api::moves_applicable(const Json& req) const
{
    const auto f = function_from_json(field(req, "function"));
    Json moves = Json::array();
    for (const auto& m : applicable_moves(f))
        moves.push_back(to_json(m));
    return with_schema({{"function", to_json(f)}, {"moves", std::move(moves)}});
}

Json Api::moves_apply(const Json& req) const
{
    const auto f = function_from_json(field(req, "function"));
    const auto m = move_from_json(field(req, "move"));
    if (auto why = move_violation(f, m); !why.empty())
        throw PreconditionError(why);
    return with_schema({{"function", to_json(apply_move(f, m))}, {"applied", to_json(m)}});
}

Json Api::series(const Json& req) const
{
    const auto pi = composition_from_json(field(req, "runs"));
    const int depth = checked_degree(field(req, "maxDegree"));
    const std::int64_t n = pi.total();
    const std::int64_t o = pi.odd_parts();
    return with_schema({{"runs", to_json(pi)},
                        {"n", n},
                        {"o", o},
                        {"series", to_json(series_coeffs(pi, depth))},
                        {"f_poly", to_json(f_pi(pi))},
                        {"z_complexity", z_complexity(pi)},
                        {"complexity", complexity(n, o)},
                        {"rank_variety_dim", rank_variety_dim(n, (n - o) / 2)},
                        {"f_support_dim", f_support_dim(n, o)},
                        {"growth_exponent", growth_exponent(pi)}});
}

Json Api::step_plan(const Json& req) const
{
    const auto mu = diagram_from_json(field(req, "mu"));
    Json options = Json::array();
    for (const auto& p : valid_steps(mu))
        options.push_back(to_json(p));
    return with_schema({{"mu", to_json(mu)}, {"default", to_json(plan_step(mu))}, {"options", std::move(options)}});
}

Json Api::step_custom(const Json& req) const
{
    const auto mu = diagram_from_json(field(req, "mu"));
    const auto i = as_int(field(req, "i"), "i");
    const auto j = as_int(field(req, "j"), "j");
    return with_schema({{"mu", to_json(mu)}, {"plan", to_json(plan_custom(mu, i, j))}});
}

} // namespace kacres::service
