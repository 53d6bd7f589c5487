#pragma once

#include <stdexcept>
#include <string>

namespace rsenv {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Environment composition / stepping.
struct SchemaMismatch : Error { using Error::Error; };
struct InvalidBounds : Error { using Error::Error; };
struct InvalidAction : Error { using Error::Error; };
struct EpisodeFinished : Error { using Error::Error; };

// Data ingestion.
struct ParseError : Error {
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line(line) {}
    std::size_t line;
};
struct MissingColumn : Error { using Error::Error; };
struct EmptyLog : Error { using Error::Error; };

// Component specs.
struct InvalidSpec : Error { using Error::Error; };
struct EmptyPipeline : Error { using Error::Error; };

// Off-policy estimation.
struct NoMatches : Error { using Error::Error; };
struct MissingPropensity : Error { using Error::Error; };
struct NoData : Error { using Error::Error; };

// Policies.
struct EmptyCandidates : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct UnknownPolicy : Error { using Error::Error; };

// Manifests.
struct HashMismatch : Error { using Error::Error; };
struct VersionUnsupported : Error { using Error::Error; };
struct SchemaError : Error {
    SchemaError(const std::string& field_path, const std::string& what)
        : Error(field_path + ": " + what), field_path(field_path) {}
    std::string field_path;
};

}  // namespace rsenv
