#include "kacres/memo_cache.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>

#include "kacres/api.hpp"
#include "kacres/errors.hpp"

namespace kacres::service {

namespace {

MemoEntry entry_from_json(const Json& j)
{
    MemoEntry e{diagram_from_json(j.at("mu")), 0, {}};
    if (!j.at("depth").is_number_integer())
        throw ParseError("depth must be an integer");
    e.depth = j.at("depth").get<int>();
    const auto& terms = j.at("terms");
    if (!terms.is_array() || e.depth < 0 || terms.size() != static_cast<std::size_t>(e.depth) + 1)
        throw ParseError("terms must list depth+1 degrees");
    for (const auto& term : terms) {
        SummandMap m;
        for (const auto& s : term) {
            auto lam = diagram_from_json(s.at("lambda"));
            if (!s.at("multiplicity").is_number_integer())
                throw ParseError("multiplicity must be an integer");
            const auto mult = s.at("multiplicity").get<Multiplicity>();
            if (mult <= 0)
                throw ParseError("multiplicity must be positive");
            if (lam.size() != e.mu.size() || !leq(e.mu, lam))
                throw ParseError("summand " + to_string(lam) + " is not above " + to_string(e.mu));
            if (!m.emplace(std::move(lam), mult).second)
                throw ParseError("duplicate summand");
        }
        e.terms.push_back(std::move(m));
    }
    if (e.terms[0] != SummandMap{{e.mu, 1}})
        throw ParseError("degree 0 must be P(mu) once");
    return e;
}

Json entry_to_json(const MemoEntry& e)
{
    Json terms = Json::array();
    for (const auto& t : e.terms) {
        Json list = Json::array();
        for (const auto& [lam, m] : t)
            list.push_back({{"lambda", to_json(lam)}, {"multiplicity", m}});
        terms.push_back(std::move(list));
    }
    return Json{{"mu", to_json(e.mu)}, {"depth", e.depth}, {"terms", std::move(terms)}};
}

} // namespace

CacheLoadStats load_memo_cache(Resolver& resolver, const std::filesystem::path& path, std::ostream& warn)
{
    CacheLoadStats stats;
    std::ifstream in(path);
    if (!in)
        return stats;
    std::string line;
    if (!std::getline(in, line))
        return stats;
    try {
        auto header = Json::parse(line);
        if (header.at("format") != "kacres-memo" || header.at("version") != kMemoCacheVersion)
            throw ParseError("unsupported header");
    } catch (const std::exception& e) {
        warn << "warning: ignoring memo cache " << path << ": bad header (" << e.what() << ")\n";
        return stats;
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        try {
            resolver.memo_insert(entry_from_json(Json::parse(line)));
            ++stats.loaded;
        } catch (const std::exception& e) {
            ++stats.skipped;
            warn << "warning: " << path.string() << ":" << lineno << ": skipping corrupt memo line (" << e.what()
                 << ")\n";
        }
    }
    return stats;
}

void save_memo_cache(const Resolver& resolver, const std::filesystem::path& path)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write memo cache " + tmp.string());
        out << Json{{"format", "kacres-memo"}, {"version", kMemoCacheVersion}}.dump() << "\n";
        for (const auto& e : resolver.memo_snapshot())
            out << entry_to_json(e).dump() << "\n";
        if (!out)
            throw std::runtime_error("short write on memo cache " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::optional<std::string> memo_cache_path(const std::optional<std::string>& explicit_path)
{
    if (explicit_path && !explicit_path->empty())
        return explicit_path;
    if (const char* env = std::getenv("KACRES_CACHE"); env && *env)
        return std::string(env);
    return std::nullopt;
}

} // namespace kacres::service
