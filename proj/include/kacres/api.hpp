#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "kacres/moves.hpp"
#include "kacres/resolution.hpp"
#include "kacres/series.hpp"

namespace kacres::service {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

enum class OutputFormat { Json, Table, Ascii };

OutputFormat parse_output_format(std::string_view text);

struct JobConfig {
    int max_degree_cap = 64;
    std::optional<std::string> memo_cache_path;
    int port = 8080;
    std::string host = "127.0.0.1";
    OutputFormat output_format = OutputFormat::Json;
};

/// Requested degree above the configured cap.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// How an exception maps onto the operator surface.
struct ErrorClass {
    int http_status;
    int exit_code;
    const char* kind;
};

/// Must be called from inside a catch block.
ErrorClass classify_current_exception();
Json error_body(const ErrorClass& c, const std::string& message);

// Serialization shared by the CLI and the HTTP service.
Json to_json(const WeightDiagram& d);
Json to_json(const RunComposition& pi);
Json to_json(const MoveRecord& m);
Json to_json(const AllowableFunction& f);
Json to_json(const Resolution& r);
Json to_json(const IntPolynomial& p);
Json to_json(const TruncatedSeries& s);
Json to_json(const StepPlan& plan);

/// Accepts either a JSON integer array or a bracket string "[a,b,...]".
WeightDiagram diagram_from_json(const Json& j);
RunComposition composition_from_json(const Json& j);
MoveRecord move_from_json(const Json& j);
/// Reads source, target and pairing; trace is optional and derived fields
/// are ignored.
AllowableFunction function_from_json(const Json& j);

/// Canonical text of a response body. CLI and HTTP both emit this.
std::string dump(const Json& j);

/// Request handlers. Each takes the request object and returns the response
/// object including schema_version.
class Api {
public:
    explicit Api(JobConfig config, Resolver& resolver = Resolver::shared());

    const JobConfig& config() const noexcept { return config_; }
    Resolver& resolver() noexcept { return resolver_; }

    Json health() const;
    Json parse_diagram(const Json& req) const;
    Json resolve(const Json& req);
    Json functions(const Json& req);
    Json moves_applicable(const Json& req) const;
    Json moves_apply(const Json& req) const;
    Json series(const Json& req) const;
    Json step_plan(const Json& req) const;
    Json step_custom(const Json& req) const;

    /// Validates a requested degree against the cap.
    int checked_degree(const Json& value) const;

private:
    JobConfig config_;
    Resolver& resolver_;
};

} // namespace kacres::service
