#include "hippo/transcript.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hippo/errors.hpp"

namespace hippo {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw FormatError("transcript: " + where + ": " + what);
}

const json& require_field(const json& obj, const char* field, const std::string& where) {
    auto it = obj.find(field);
    if (it == obj.end()) fail(where, std::string("missing field '") + field + "'");
    return *it;
}

std::string require_string(const json& obj, const char* field, const std::string& where) {
    const json& v = require_field(obj, field, where);
    if (!v.is_string()) fail(where + "." + field, "expected a string");
    return v.get<std::string>();
}

// Civil date to days since the Unix epoch (proleptic Gregorian).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

}  // namespace

std::int64_t parse_rfc3339_micros(std::string_view text) {
    // YYYY-MM-DDTHH:MM:SS[.frac][Z|+HH:MM|-HH:MM]
    auto digit = [&](std::size_t i) -> int {
        if (i >= text.size() || text[i] < '0' || text[i] > '9') {
            throw FormatError("bad RFC-3339 timestamp: " + std::string(text));
        }
        return text[i] - '0';
    };
    auto expect = [&](std::size_t i, char c) {
        if (i >= text.size() || text[i] != c) {
            throw FormatError("bad RFC-3339 timestamp: " + std::string(text));
        }
    };
    if (text.size() < 20) throw FormatError("bad RFC-3339 timestamp: " + std::string(text));

    const int year = digit(0) * 1000 + digit(1) * 100 + digit(2) * 10 + digit(3);
    expect(4, '-');
    const int month = digit(5) * 10 + digit(6);
    expect(7, '-');
    const int day = digit(8) * 10 + digit(9);
    if (text[10] != 'T' && text[10] != 't' && text[10] != ' ') {
        throw FormatError("bad RFC-3339 timestamp: " + std::string(text));
    }
    const int hour = digit(11) * 10 + digit(12);
    expect(13, ':');
    const int minute = digit(14) * 10 + digit(15);
    expect(16, ':');
    const int second = digit(17) * 10 + digit(18);
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 ||
        second > 60) {
        throw FormatError("bad RFC-3339 timestamp: " + std::string(text));
    }

    std::size_t pos = 19;
    std::int64_t micros = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::int64_t scale = 100000;
        bool any = false;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            if (scale > 0) micros += (text[pos] - '0') * scale;
            scale /= 10;
            ++pos;
            any = true;
        }
        if (!any) throw FormatError("bad RFC-3339 timestamp: " + std::string(text));
    }

    std::int64_t offset_s = 0;
    if (pos >= text.size()) throw FormatError("bad RFC-3339 timestamp: " + std::string(text));
    if (text[pos] == 'Z' || text[pos] == 'z') {
        ++pos;
    } else if (text[pos] == '+' || text[pos] == '-') {
        const int sign = text[pos] == '+' ? 1 : -1;
        const int oh = digit(pos + 1) * 10 + digit(pos + 2);
        expect(pos + 3, ':');
        const int om = digit(pos + 4) * 10 + digit(pos + 5);
        offset_s = sign * (oh * 3600 + om * 60);
        pos += 6;
    } else {
        throw FormatError("bad RFC-3339 timestamp: " + std::string(text));
    }
    if (pos != text.size()) throw FormatError("bad RFC-3339 timestamp: " + std::string(text));

    const std::int64_t days = days_from_civil(year, static_cast<unsigned>(month),
                                              static_cast<unsigned>(day));
    const std::int64_t secs =
        days * 86400 + hour * 3600 + minute * 60 + second - offset_s;
    return secs * 1'000'000 + micros;
}

TranscriptDocument parse_transcript(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("transcript: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("document", "expected a JSON object");

    TranscriptDocument out;
    const json& sessions = require_field(doc, "sessions", "document");
    if (!sessions.is_array()) fail("sessions", "expected an array");

    for (std::size_t si = 0; si < sessions.size(); ++si) {
        const std::string where = "sessions[" + std::to_string(si) + "]";
        const json& s = sessions[si];
        if (!s.is_object()) fail(where, "expected an object");

        TranscriptSession session;
        session.session_id = require_string(s, "session_id", where);
        session.timestamp = require_string(s, "timestamp", where);
        try {
            session.timestamp_us = parse_rfc3339_micros(session.timestamp);
        } catch (const FormatError& e) {
            fail(where + ".timestamp", e.what());
        }

        const json& turns = require_field(s, "turns", where);
        if (!turns.is_array()) fail(where + ".turns", "expected an array");
        for (std::size_t ti = 0; ti < turns.size(); ++ti) {
            const std::string turn_where = where + ".turns[" + std::to_string(ti) + "]";
            const json& t = turns[ti];
            if (!t.is_object()) fail(turn_where, "expected an object");
            TranscriptTurn turn;
            turn.speaker = require_string(t, "speaker", turn_where);
            turn.text = require_string(t, "text", turn_where);
            session.turns.push_back(std::move(turn));
        }
        out.sessions.push_back(std::move(session));
    }
    return out;
}

TranscriptDocument load_transcript(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open transcript: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_transcript(buf.str());
}

}  // namespace hippo
