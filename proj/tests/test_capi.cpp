#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <string>

#include "qpde.h"

namespace {

const char* kConfig = R"(
[domain]
a 0
b 10

[term]
order 2
stencil central 2

[boundary]
robin 0.5 0.25 1 0.25

[initial]
builtin sin_half

[grid]
n 2
n_xi 5
L_xi 12

[run]
mode matrix
T 0.1
epsilon 1e-07
homogenize identity
xi_star 1.5
window 3
)";

} // namespace

TEST_CASE("parse, serialize and free through the C surface") {
    qpde_problem* p = nullptr;
    REQUIRE(qpde_problem_parse(kConfig, &p) == QPDE_OK);
    REQUIRE(p != nullptr);

    char* text = nullptr;
    REQUIRE(qpde_problem_serialize(p, &text) == QPDE_OK);
    CHECK(std::strstr(text, "robin 0.5 0.25 1 0.25") != nullptr);

    qpde_problem* p2 = nullptr;
    REQUIRE(qpde_problem_parse(text, &p2) == QPDE_OK);
    char* text2 = nullptr;
    REQUIRE(qpde_problem_serialize(p2, &text2) == QPDE_OK);
    CHECK(std::string(text) == text2);

    qpde_string_free(text);
    qpde_string_free(text2);
    qpde_problem_free(p);
    qpde_problem_free(p2);
}

TEST_CASE("parse failures report an error message") {
    qpde_problem* p = nullptr;
    CHECK(qpde_problem_parse("[domain]\na zero\n", &p) == QPDE_ERR_PARSE);
    CHECK(p == nullptr);
    CHECK(std::strlen(qpde_last_error()) > 0);
    CHECK(qpde_problem_parse(nullptr, &p) == QPDE_ERR_ARGUMENT);
}

TEST_CASE("setters validate their arguments") {
    qpde_problem* p = nullptr;
    REQUIRE(qpde_problem_parse(kConfig, &p) == QPDE_OK);
    CHECK(qpde_set_mode(p, "circuit") == QPDE_OK);
    CHECK(qpde_set_mode(p, "analog") == QPDE_ERR_ARGUMENT);
    double t = -1.0;
    CHECK(qpde_set_times(p, &t, 0) == QPDE_ERR_ARGUMENT);
    qpde_problem_free(p);
}

TEST_CASE("run produces metrics text") {
    qpde_problem* p = nullptr;
    REQUIRE(qpde_problem_parse(kConfig, &p) == QPDE_OK);
    double times[] = {0.1};
    REQUIRE(qpde_set_times(p, times, 1) == QPDE_OK);

    char* metrics = nullptr;
    REQUIRE(qpde_run(p, &metrics) == QPDE_OK);
    std::string m = metrics;
    CHECK(m.find("T=0.1") != std::string::npos);
    CHECK(m.find("fidelity=") != std::string::npos);
    CHECK(m.find("success_prob=") != std::string::npos);
    qpde_string_free(metrics);

    char* report = nullptr;
    REQUIRE(qpde_discretize_report(p, &report) == QPDE_OK);
    CHECK(std::strstr(report, "CFL step") != nullptr);
    qpde_string_free(report);
    qpde_problem_free(p);
}
