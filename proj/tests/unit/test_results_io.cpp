#include "weavetex/builtin.hpp"
#include "weavetex/error.hpp"
#include "weavetex/executor.hpp"
#include "weavetex/planner.hpp"
#include "weavetex/results_io.hpp"
#include "weavetex/scanner.hpp"

#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace weavetex;
using weavetex::testing::slurp;

namespace {

const std::filesystem::path kFixtures = WEAVETEX_FIXTURE_DIR;

ErrorCode parse_error_of(const std::string& text) {
    try {
        parse_results(text);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a parse failure");
    return ErrorCode::IoError;
}

ResultSet random_results(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> small(0, 6);
    auto text = [&] {
        std::string s;
        const std::string alphabet = "ab\\{}$ \n\"\t1é%";
        for (int n = small(rng); n > 0; --n)
            s += alphabet[static_cast<std::size_t>(small(rng)) % alphabet.size()];
        // Keep the string valid UTF-8: never cut the two-byte 'é' in half.
        std::string out;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (static_cast<unsigned char>(s[i]) < 0x80)
                out += s[i];
        return out;
    };
    ResultSet rs;
    rs.doc_hash = sha256_hex(text());
    rs.backend_id = text();
    for (int n = small(rng) * 3; n > 0; --n) {
        ResultRecord r;
        r.ordinal = static_cast<std::size_t>(small(rng) * 7 + small(rng));
        r.status = static_cast<ResultStatus>(small(rng) % 3);
        if (small(rng) % 2)
            r.latex = text();
        if (small(rng) % 2) {
            r.files = std::vector<std::string>{};
            for (int k = small(rng); k > 0; --k)
                r.files->push_back(text());
        }
        if (small(rng) % 2)
            r.error_message = text() + "é";
        r.eps_conversion_requested = small(rng) == 0;
        rs.records[r.ordinal] = r;
    }
    return rs;
}

} // namespace

TEST_CASE("results file shape") {
    ResultSet rs;
    rs.doc_hash = "abc";
    rs.backend_id = "builtin";
    rs.records[2] = ResultRecord{2, ResultStatus::Ok, "4", std::nullopt, std::nullopt, false};
    rs.records[10] = ResultRecord{10, ResultStatus::Error, std::nullopt, std::nullopt, "boom", false};
    rs.records[3] = ResultRecord{3, ResultStatus::Ok, std::nullopt,
                                 std::vector<std::string>{"d/plot-3.png"}, std::nullopt, true};
    const std::string json1 = R"({
  "backend_id": "builtin",
  "doc_hash": "abc",
  "records": {
    "10": {
      "error": "boom",
      "ordinal": 10,
      "status": "error"
    },
    "2": {
      "latex": "4",
      "ordinal": 2,
      "status": "ok"
    },
    "3": {
      "eps_conversion": true,
      "files": [
        "d/plot-3.png"
      ],
      "ordinal": 3,
      "status": "ok"
    }
  },
  "version": 1
}
)";
    CHECK(serialize_results(rs) == json1);
}

TEST_CASE("empty result set") {
    ResultSet rs;
    std::string text = serialize_results(rs);
    CHECK(text == "{\n  \"backend_id\": \"\",\n  \"doc_hash\": \"\",\n  \"records\": {},\n  \"version\": 1\n}\n");
    CHECK(parse_results(text) == rs);
}

TEST_CASE("property: serialize/parse round-trips and is byte-stable") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 300; ++i) {
        ResultSet rs = random_results(rng);
        std::string text = serialize_results(rs);
        ResultSet back = parse_results(text);
        CHECK(back == rs);
        CHECK(serialize_results(back) == text);
    }
}

TEST_CASE("rejected results files") {
    ResultSet rs;
    rs.doc_hash = "h";
    rs.records[1] = ResultRecord{1, ResultStatus::Ok, "x", std::nullopt, std::nullopt, false};
    std::string text = serialize_results(rs);

    std::string v2 = text;
    v2.replace(v2.find("\"version\": 1"), 12, "\"version\": 2");
    CHECK(parse_error_of(v2) == ErrorCode::VersionMismatch);
    CHECK(parse_error_of(text.substr(0, text.size() / 2)) == ErrorCode::ParseError);
    CHECK(parse_error_of("") == ErrorCode::ParseError);
    CHECK(parse_error_of("[]") == ErrorCode::ParseError);

    std::string wrong_key = text;
    wrong_key.replace(wrong_key.find("\"1\":"), 4, "\"7\":");
    CHECK(parse_error_of(wrong_key) == ErrorCode::ParseError);

    std::string bad_status = text;
    bad_status.replace(bad_status.find("\"ok\""), 4, "\"meh\"");
    CHECK(parse_error_of(bad_status) == ErrorCode::ParseError);
}

TEST_CASE("atomic write and read back") {
    weavetex::testing::TempDir dir;
    std::mt19937_64 rng(3);
    ResultSet rs = random_results(rng);
    auto path = dir / "doc.wout";
    write_results(rs, path);
    CHECK(read_results(path) == rs);
    CHECK(slurp(path) == serialize_results(rs));
    // No temporary files are left behind.
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path()))
        ++entries;
    CHECK(entries == 1);

    CHECK_THROWS_AS(read_results(dir / "missing.wout"), Error);
    CHECK_THROWS_AS(write_results(rs, dir / "no/such/dir/doc.wout"), Error);
}

TEST_CASE("golden results file for the arithmetic fixture") {
    weavetex::testing::TempDir dir;
    JobPlan jobs = plan(scan_document(slurp(kFixtures / "arith.tex")), Clock{2009, 1, 1});
    CHECK(jobs.doc_hash == "d1df6bc773e8bf9ea48ee646e73a0059f362ec05bfb6f64e661ba388ac8391e8");
    BuiltinBackend backend(dir.path());
    ResultSet rs = execute(jobs, backend);
    CHECK(serialize_results(rs) == slurp(kFixtures / "arith.wout"));
    CHECK(parse_results(slurp(kFixtures / "arith.wout")) == rs);
}
