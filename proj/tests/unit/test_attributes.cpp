#include "doctest.h"

#include <cmath>
#include <sstream>

#include "mlsim/attributes.hpp"
#include "mlsim/errors.hpp"

using namespace mlsim;

TEST_CASE("numeric values round-trip and reject junk") {
    AttributeTable t;
    t.set_numeric(0, "age", 31.5);
    t.set_numeric(1, "age", 24.0);
    CHECK_THROWS_AS(t.set_numeric(0, "age", 40.0), InputError);     // duplicate
    CHECK_THROWS_AS(t.set_numeric(2, "age", std::nan("")), InputError);
    t.finalize();
    CHECK(t.value(0, "age") == 31.5);
    CHECK(t.value(1, "age") == 24.0);
    CHECK_FALSE(t.value(5, "age").has_value());
    CHECK(t.require("age").kind == AttrKind::numeric);
}

TEST_CASE("binary categorical gets the automatic sorted encoding") {
    AttributeTable t;
    t.set_categorical(0, "gender", "m");
    t.set_categorical(1, "gender", "f");
    t.set_categorical(2, "gender", "f");
    t.finalize();
    // alphabetical: f -> 0, m -> 1
    CHECK(t.value(0, "gender") == 1.0);
    CHECK(t.value(1, "gender") == 0.0);
    CHECK(t.value(2, "gender") == 0.0);
    CHECK(t.require("gender").encoding.at("f") == 0.0);
    CHECK(t.require("gender").encoding.at("m") == 1.0);
}

TEST_CASE("three labels need an explicit encoding") {
    AttributeTable t;
    t.set_categorical(0, "city", "x");
    t.set_categorical(1, "city", "y");
    t.set_categorical(2, "city", "z");
    CHECK_THROWS_AS(t.finalize(), InputError);

    AttributeTable t2;
    t2.set_categorical(0, "city", "x");
    t2.set_categorical(1, "city", "y");
    t2.set_categorical(2, "city", "z");
    t2.declare_encoding("city", {{"x", 0.0}, {"y", 1.0}, {"z", 2.0}});
    std::ostringstream warn;
    t2.finalize(&warn);
    CHECK(t2.value(2, "city") == 2.0);
    CHECK(warn.str().find("city") != std::string::npos); // ordinal-use note
}

TEST_CASE("declared encodings must be injective and cover every label") {
    AttributeTable t;
    t.set_categorical(0, "g", "a");
    t.set_categorical(1, "g", "b");
    CHECK_THROWS_AS(t.declare_encoding("g", {{"a", 1.0}, {"b", 1.0}}), InputError);

    AttributeTable t2;
    t2.set_categorical(0, "g", "a");
    t2.set_categorical(1, "g", "b");
    t2.declare_encoding("g", {{"a", 0.0}}); // misses "b"
    CHECK_THROWS_AS(t2.finalize(), InputError);
}

TEST_CASE("a declared two-label encoding overrides the automatic one") {
    AttributeTable t;
    t.set_categorical(0, "g", "a");
    t.set_categorical(1, "g", "b");
    t.declare_encoding("g", {{"a", 5.0}, {"b", -5.0}});
    std::ostringstream warn;
    t.finalize(&warn);
    CHECK(t.value(0, "g") == 5.0);
    CHECK(t.value(1, "g") == -5.0);
    CHECK(warn.str().empty());
}

TEST_CASE("variables keep their kind and names come back sorted") {
    AttributeTable t;
    t.set_numeric(0, "score", 1.0);
    t.set_categorical(0, "gender", "m");
    t.set_categorical(1, "gender", "f");
    CHECK_THROWS_AS(t.set_numeric(2, "gender", 1.0), InputError); // kind clash
    t.finalize();
    CHECK(t.variable_names() == std::vector<std::string>{"gender", "score"});
    CHECK(t.find("missing") == nullptr);
    CHECK_THROWS_AS(t.require("missing"), InputError);
}

TEST_CASE("duplicate categorical assignment is rejected") {
    AttributeTable t;
    t.set_categorical(0, "g", "a");
    CHECK_THROWS_AS(t.set_categorical(0, "g", "b"), InputError);
}

TEST_CASE("values are unavailable before finalize for categoricals") {
    AttributeTable t;
    t.set_categorical(0, "g", "a");
    t.set_categorical(1, "g", "b");
    CHECK_FALSE(t.finalized());
    t.finalize();
    CHECK(t.finalized());
    CHECK(t.value(0, "g").has_value());
}
