#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qpc/io.hpp"
#include "support.hpp"

using namespace qpc;
using qpc::io::Json;

namespace {

const Prime p3(3);

std::string message_of(const std::string& text) {
    try {
        const auto d = io::parse_document(text, "in.json");
        const Prime p = io::document_prime(d, std::nullopt);
        if (d.kind == "complex") io::as_bounded(d, p);
        else if (d.kind == "periodic_complex") io::as_periodic(d, p);
        else if (d.kind == "module") io::as_module(d, p);
        else if (d.kind == "family") io::as_family(d, p);
    } catch (const io::InputError& e) {
        return e.what();
    }
    return "";
}

template <class T, class F>
T round_trip(const std::string& kind, const T& x, F decode) {
    const std::string text = io::dump(io::document(kind, x.prime(), x));
    const auto d = io::parse_document(text, "mem");
    const T y = decode(d, x.prime());
    CHECK(io::dump(io::document(kind, y.prime(), y)) == text);
    return y;
}

}  // namespace

TEST_CASE("scalar syntax") {
    CHECK(io::format_scalar(PLocal(mpz_class(-6), mpz_class(4))) == "-3/2");
    CHECK(io::format_scalar(PLocal(7)) == "7");
    CHECK(io::parse_scalar(Json("2/4"), p3, "/x") == PLocal(mpz_class(1), mpz_class(2)));
    CHECK(io::parse_scalar(Json("-5"), p3, "/x") == PLocal(-5));
    CHECK_THROWS_AS(io::parse_scalar(Json("1/3"), p3, "/x"), io::InputError);
    CHECK_THROWS_AS(io::parse_scalar(Json("1/0"), p3, "/x"), io::InputError);
    CHECK_THROWS_AS(io::parse_scalar(Json(2), p3, "/x"), io::InputError);
    CHECK_THROWS_AS(io::parse_scalar(Json("0.5"), p3, "/x"), io::InputError);
    // 1/6 is not 3-local but is 5-local.
    CHECK(io::parse_scalar(Json("1/6"), Prime(5), "/x") == PLocal(mpz_class(1), mpz_class(6)));
}

TEST_CASE("round trips") {
    testing::Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const long p = trial % 2 ? 5 : 3;
        const auto m = testing::random_adams_module(rng, Prime(p));
        CHECK(round_trip("module", m, io::as_module) == m);
        const auto x = testing::random_bounded_complex(rng, Prime(p), -1, 2);
        CHECK(round_trip("complex", x, io::as_bounded) == x);
        const auto c = periodify(x, Config::standard(Prime(p)));
        CHECK(round_trip("periodic_complex", c, io::as_periodic) == c);
    }
    const auto line = AdamsModule::line(p3, -2);
    CHECK(io::to_json(line) == Json{{"line", -2}});
    CHECK(io::to_json(BoundedComplex::zero(p3)) == Json{{"levels", Json::object()}, {"diffs", Json::object()}});

    const auto fam = DetectionFamily::standard(p3, -1, 1, 2);
    const auto text = io::dump(io::document("family", p3, fam));
    const auto back = io::as_family(io::parse_document(text, "mem"), p3);
    CHECK(back.members == fam.members);
    CHECK(back.labels == fam.labels);
    CHECK(back.window_lo == -1);
    CHECK(back.window_hi == 1);
}

TEST_CASE("map round trips") {
    testing::Rng rng(78);
    const auto x = testing::random_bounded_complex(rng, p3, 0, 2);
    const auto y = testing::random_bounded_complex(rng, p3, -1, 1);
    const auto f = testing::random_chain_map(rng, x, y);
    const auto ft = io::dump(io::document("chain_map", p3, f));
    const auto g = io::as_chain_map(io::parse_document(ft, "mem"), p3);
    CHECK(g.source == f.source);
    CHECK(g.target == f.target);
    for (long n = x.lo(); n <= x.hi(); ++n) CHECK(g.component(n) == f.component(n));

    const Config cfg = Config::standard(p3);
    const auto c = periodify(x, cfg);
    const auto h = testing::random_periodic_map(rng, c, c);
    const auto ht = io::dump(io::document("periodic_map", p3, h));
    CHECK(io::as_periodic_map(io::parse_document(ht, "mem"), p3) == h);
}

TEST_CASE("malformed input") {
    CHECK(message_of("{\n  \"schema_version\": 1,\n  \"kind\": \"module\"\n  \"p\": 3\n}").find("in.json:4:5:") == 0);
    CHECK(message_of("{\"kind\": \"module\", \"p\": 3, \"line\": 0}").find("missing field \"schema_version\"") !=
          std::string::npos);
    CHECK(message_of("{\"schema_version\": 2, \"kind\": \"module\", \"p\": 3, \"line\": 0}").find("at /schema_version") !=
          std::string::npos);
    CHECK(message_of("{\"schema_version\": 1, \"kind\": \"blob\", \"p\": 3}").find("at /kind") != std::string::npos);
    CHECK(message_of("{\"schema_version\": 1, \"kind\": \"module\", \"p\": 4, \"line\": 0}").find("at /p") !=
          std::string::npos);
    CHECK(message_of("{\"schema_version\": 1, \"kind\": \"module\", \"line\": 0}").find("neither") != std::string::npos);
    CHECK(message_of(R"({"schema_version": 1, "kind": "module", "p": 3, "rank": 1, "torsion": [], "psi": [["1/3"]]})")
              .find("in.json: at /psi/0/0: \"1/3\" is not p-local") == 0);
    CHECK(message_of(R"({"schema_version": 1, "kind": "module", "p": 3, "rank": 1, "torsion": [], "psi": [["1"]], "x": 1})")
              .find("at /x: unknown field") != std::string::npos);
    CHECK(message_of(R"({"schema_version": 1, "kind": "module", "p": 3, "rank": 1, "torsion": [], "psi": [["2"]]})")
              .find("in.json: at /:") == 0);
    CHECK(message_of(R"({"schema_version": 1, "kind": "module", "p": 3, "rank": 2, "torsion": [], "psi": [["1", "0"]]})")
              .find("at /psi: expected 2 rows") != std::string::npos);

    // d o d != 0: Z --1--> Z --1--> Z in degrees 2, 1, 0.
    const std::string bad = R"({"schema_version": 1, "kind": "complex", "p": 3,
      "levels": {"0": {"line": 0}, "1": {"line": 0}, "2": {"line": 0}},
      "diffs": {"1": [["1"]], "2": [["1"]]}})";
    const auto msg = message_of(bad);
    CHECK(msg.find("d o d != 0 at degree 2") != std::string::npos);
    CHECK(msg.find("in.json: at /:") == 0);

    CHECK(message_of(R"({"schema_version": 1, "kind": "complex", "p": 3, "levels": {"a": {"line": 0}}})")
              .find("at /levels/a: degree keys must be integers") != std::string::npos);
    CHECK(message_of(R"({"schema_version": 1, "kind": "complex", "p": 3, "levels": {"0": {"line": 0}},
                         "diffs": {"1": [["1"]]}})")
              .find("at /diffs/1: differential outside") != std::string::npos);
    CHECK(message_of(R"({"schema_version": 1, "kind": "complex", "p": 3,
      "levels": {"0": {"line": 0}, "1": {"line": 1}}, "diffs": {"1": [["1"]]}})")
              .find("at /diffs/1:") != std::string::npos);
    CHECK(message_of(R"({"schema_version": 1, "kind": "family", "p": 3, "members": [{"orders": [1], "psi": [["1"]]}]})")
              .find("at /members/0: family members must be") != std::string::npos);
}

TEST_CASE("gaps in the levels are zero") {
    const auto d = io::parse_document(R"({"schema_version": 1, "kind": "complex", "p": 3,
      "levels": {"-1": {"line": 0}, "2": {"line": 1}}})",
                                      "mem");
    const auto x = io::as_bounded(d, p3);
    CHECK(x.lo() == -1);
    CHECK(x.hi() == 2);
    CHECK(x.level(0).is_zero());
    CHECK(x.level(2) == AdamsModule::line(p3, 1));
}

TEST_CASE("shipped examples round trip") {
    namespace fs = std::filesystem;
    int checked = 0;
    for (const auto& entry : fs::directory_iterator(QPC_DATA_DIR)) {
        const auto path = entry.path();
        if (path.extension() != ".json") continue;
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        const std::string text = ss.str();
        const std::string name = path.filename().string();
        if (name == "malformed.json" || name == "not_a_complex.json") {
            CHECK_FALSE(message_of(text).empty());
            continue;
        }
        INFO(name);
        const auto d = io::parse_document(text, name);
        const Prime p = io::document_prime(d, std::nullopt);
        Json body;
        if (d.kind == "module") body = io::to_json(io::as_module(d, p));
        else if (d.kind == "complex") body = io::to_json(io::as_bounded(d, p));
        else if (d.kind == "periodic_complex") body = io::to_json(io::as_periodic(d, p));
        else if (d.kind == "chain_map") body = io::to_json(io::as_chain_map(d, p));
        else if (d.kind == "periodic_map") body = io::to_json(io::as_periodic_map(d, p));
        else if (d.kind == "chain_map_to_periodic") body = io::to_json(io::as_chain_map_to_periodic(d, p));
        else if (d.kind == "family") body = io::to_json(io::as_family(d, p));
        CHECK(io::dump(io::document(d.kind, p, body)) == text);
        ++checked;
    }
    CHECK(checked >= 15);
}
