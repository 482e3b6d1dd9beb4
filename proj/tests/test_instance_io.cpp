#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "support/malformed_corpus.hpp"
#include "support/testing.hpp"
#include "vcsp/errors.hpp"
#include "vcsp/generators.hpp"
#include "vcsp/instance_io.hpp"

using namespace vcsp;
using namespace vcsp::testing;

TEST_CASE("parse_instance accepts well-formed documents") {
    SUBCASE("one variable, one value") {
        const auto inst = parse_instance("csp 1\ndom 0 5\n");
        CHECK(inst.num_variables() == 1);
        CHECK(inst.domain_size(0) == 1);
        CHECK(inst.labels(0)[0] == 5);
        CHECK(inst.constraints().empty());
    }
    SUBCASE("labels map to indices in listed order") {
        const auto inst = parse_instance(
            "# a comment\n"
            "csp 2   # trailing comment\n"
            "dom 1 7 3\n"
            "dom 0 -2 10 4\n"
            "con 1 0 forbid 2 7 10 3 -2\n");
        CHECK(inst.domain_size(0) == 3);
        CHECK(inst.labels(1)[0] == 7);
        const auto& c = inst.constraint(0);
        CHECK(c.first() == 1);
        CHECK(c.second() == 0);
        CHECK_FALSE(c.allows(0, 1));  // 7, 10
        CHECK_FALSE(c.allows(1, 0));  // 3, -2
        CHECK(c.allowed_count() == 4);
    }
    SUBCASE("allow lists supports") {
        const auto inst = parse_instance("csp 2\ndom 0 0 1\ndom 1 0 1\ncon 0 1 allow 2 0 1 1 0\n");
        CHECK(count_solutions_exact(inst) == 2);
        CHECK(inst == uniform_instance(2, 2, {not_equal(0, 1, 2)}));
    }
    SUBCASE("CRLF and tabs") {
        const auto inst = parse_instance("csp 2\r\ndom 0\t1 2\r\ndom 1 1\r\ncon\t0 1 forbid 1 1 1\r\n");
        CHECK(count_solutions_exact(inst) == 1);
    }
    SUBCASE("unary restriction folds into the domain") {
        const auto inst = parse_instance(
            "csp 2\ndom 0 1 2 3\ndom 1 1 2 3\nuna 0 2 3 1\ncon 0 1 forbid 2 2 2 3 3\n");
        CHECK(inst.domain_size(0) == 2);
        CHECK(inst.labels(0)[0] == 1);
        CHECK(inst.labels(0)[1] == 3);
        // (3,3) stays forbidden, (2,2) referred to a removed label
        CHECK(inst.constraint(0).forbidden_count() == 1);
        CHECK(count_solutions_exact(inst) == 5);
    }
}

TEST_CASE("malformed corpus gives positioned errors") {
    for (const auto& doc : malformed_corpus) {
        INFO(doc.name);
        bool caught = false;
        try {
            parse_instance(doc.text);
        } catch (const ParseError& e) {
            caught = true;
            CHECK(e.line() == doc.line);
            CHECK(e.column() == doc.column);
            CHECK((dynamic_cast<const ValidationError*>(&e) != nullptr) == doc.validation);
        }
        CHECK(caught);
    }
}

TEST_CASE("validation errors name the offending constraint") {
    try {
        parse_instance("csp 3\ndom 0 1\ndom 1 1\ndom 2 1\ncon 0 2 forbid 1 1 9\n");
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("constraint (0, 2)") != std::string::npos);
        CHECK(msg.find("line 5") != std::string::npos);
    }
}

TEST_CASE("serialize then parse is the identity") {
    SUBCASE("RB instances") {
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            const auto inst = generate_model_rb({10, 6, 20, 1 + seed % 30, seed});
            const auto text = serialize_instance(inst);
            CHECK(parse_instance(text) == inst);
            CHECK(serialize_instance(parse_instance(text)) == text);
        }
    }
    SUBCASE("Sudoku instances") {
        const auto inst = generate_generalized_sudoku({2, 3, 12, 4});
        CHECK(parse_instance(serialize_instance(inst)) == inst);
    }
    SUBCASE("random instances with arbitrary labels and reversed scopes") {
        Rng rng(55);
        for (int trial = 0; trial < 200; ++trial) {
            const auto base = random_instance(rng, 6, 5, 0.6, 0.5);
            std::vector<std::vector<Label>> labels(base.num_variables());
            for (VarId v = 0; v < labels.size(); ++v)
                for (ValueIndex a = 0; a < base.domain_size(v); ++a)
                    labels[v].push_back(static_cast<Label>(rng.below(1000)) * 1000 + static_cast<Label>(a) - 500000);
            const auto cons = base.constraints();
            const Instance inst(labels, std::vector<BinaryConstraint>(cons.begin(), cons.end()));
            CHECK(parse_instance(serialize_instance(inst)) == inst);
        }
    }
}

TEST_CASE("serializer picks the shorter pair list") {
    const auto text = serialize_instance(uniform_instance(2, 3, {not_equal(0, 1, 3)}));
    CHECK(text == "csp 2\ndom 0 0 1 2\ndom 1 0 1 2\ncon 0 1 forbid 3 0 0 1 1 2 2\n");
    const auto text2 = serialize_instance(uniform_instance(2, 2, {less_than(0, 1, 2)}));
    CHECK(text2 == "csp 2\ndom 0 0 1\ndom 1 0 1\ncon 0 1 allow 1 0 1\n");
}

TEST_CASE("mutated documents never escape as anything but parse errors") {
    const auto base = serialize_instance(generate_model_rb({6, 4, 8, 5, 3}));
    Rng rng(66);
    const char alphabet[] = "0123456789 -#\n\tcsdomnaflwrbiux";
    std::size_t parsed = 0, rejected = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        std::string text = base;
        const auto edits = 1 + rng.below(4);
        for (std::uint64_t e = 0; e < edits; ++e) {
            const auto pos = rng.below(text.size() + 1);
            switch (rng.below(3)) {
                case 0: text.insert(pos, 1, alphabet[rng.below(sizeof alphabet - 1)]); break;
                case 1: if (pos < text.size()) text.erase(pos, 1); break;
                default: if (pos < text.size()) text[pos] = alphabet[rng.below(sizeof alphabet - 1)]; break;
            }
        }
        try {
            parse_instance(text);
            ++parsed;
        } catch (const ParseError& e) {
            ++rejected;
            CHECK(e.line() >= 1);
            CHECK(e.column() >= 1);
        }
    }
    CHECK(parsed + rejected == 3000);
    CHECK(rejected > 0);
}

TEST_CASE("file round trip") {
    const auto path = (std::filesystem::temp_directory_path() / "vcsp_io_test.csp").string();
    const auto inst = generate_model_rb({5, 3, 4, 2, 8});
    write_instance_file(path, inst);
    CHECK(read_instance_file(path) == inst);
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_instance_file(path), std::runtime_error);
}
