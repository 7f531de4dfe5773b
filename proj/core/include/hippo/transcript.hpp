#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hippo {

// Transcript ingestion format: sessions of speaker turns. See README.md for
// the JSON grammar.
struct TranscriptTurn {
    std::string speaker;
    std::string text;
};

struct TranscriptSession {
    std::string session_id;
    std::string timestamp;          // RFC-3339, as written in the document
    std::int64_t timestamp_us = 0;  // parsed
    std::vector<TranscriptTurn> turns;
};

struct TranscriptDocument {
    std::vector<TranscriptSession> sessions;

    std::size_t turn_count() const {
        std::size_t n = 0;
        for (const auto& s : sessions) n += s.turns.size();
        return n;
    }
};

// Parses the JSON document; error messages name the offending field, e.g.
// "sessions[2].turns[0]: missing field 'text'". Throws FormatError.
TranscriptDocument parse_transcript(std::string_view json_text);

TranscriptDocument load_transcript(const std::string& path);

// RFC-3339 timestamp ("2024-05-01T12:30:00Z", fractional seconds and
// numeric offsets allowed) to microseconds since the Unix epoch.
std::int64_t parse_rfc3339_micros(std::string_view text);

}  // namespace hippo
