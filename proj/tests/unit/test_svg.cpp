#include "syncnet/errors.hpp"
#include "syncnet/svg.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <regex>
#include <vector>

using namespace syncnet;

namespace {

// Minimal well-formedness check: balanced tags, quoted attributes, only the five predefined entities.
bool well_formed(const std::string& xml, std::string& why) {
    std::vector<std::string> stack;
    std::size_t k = 0;
    while (k < xml.size()) {
        if (xml[k] == '&') {
            static const std::regex entity("^&(amp|lt|gt|quot|apos);");
            if (!std::regex_search(xml.begin() + static_cast<long>(k), xml.end(), entity)) {
                why = "bare ampersand at " + std::to_string(k);
                return false;
            }
            ++k;
            continue;
        }
        if (xml[k] != '<') {
            ++k;
            continue;
        }
        std::size_t end = k + 1;
        bool in_quote = false;
        while (end < xml.size() && (in_quote || xml[end] != '>')) {
            if (xml[end] == '"') in_quote = !in_quote;
            if (!in_quote && xml[end] == '<') {
                why = "unexpected '<' inside a tag at " + std::to_string(end);
                return false;
            }
            ++end;
        }
        if (end == xml.size()) {
            why = "unterminated tag";
            return false;
        }
        std::string tag = xml.substr(k + 1, end - k - 1);
        if (tag.empty()) {
            why = "empty tag";
            return false;
        }
        if (tag[0] == '/') {
            std::string name = tag.substr(1);
            if (stack.empty() || stack.back() != name) {
                why = "mismatched </" + name + ">";
                return false;
            }
            stack.pop_back();
        } else if (tag.back() != '/') {
            stack.push_back(tag.substr(0, tag.find_first_of(" \n\t")));
        }
        k = end + 1;
    }
    if (!stack.empty()) why = "unclosed <" + stack.back() + ">";
    return stack.empty();
}

std::size_t count(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("svg structure", "[svg]") {
    std::vector<double> t, y1, y2;
    for (int k = 0; k <= 100; ++k) {
        t.push_back(0.1 * k);
        y1.push_back(std::exp(-0.5 * k));
        y2.push_back(k == 50 ? 0.0 : 3.0);
    }
    std::string svg = render_svg({{"e_norm", t, y1}, {"a<b & \"c\"", t, y2}}, {1.0, 2.0, 3.0}, "run <1>");
    std::string why;
    CHECK(well_formed(svg, why));
    INFO(why);
    CHECK(svg.find("viewBox=\"0 0 960 540\"") != std::string::npos);
    CHECK(count(svg, "<polyline") == 2);
    CHECK(count(svg, "class=\"switch\"") == 3);
    CHECK(svg.find("a&lt;b &amp; &quot;c&quot;") != std::string::npos);
    CHECK(svg.find("nan") == std::string::npos);
    CHECK(svg.find("inf") == std::string::npos);
}

TEST_CASE("svg edge cases", "[svg]") {
    std::string why;
    std::string empty = render_svg({}, {}, "empty");
    CHECK(well_formed(empty, why));
    CHECK(count(empty, "<polyline") == 0);

    std::string flat = render_svg({{"zero", {0.0, 1.0}, {0.0, 0.0}}}, {}, "zeros");
    CHECK(well_formed(flat, why));
    CHECK(count(flat, "<polyline") == 1);

    CHECK_THROWS_AS(render_svg({{"bad", {0.0, 1.0}, {1.0}}}, {}, "x"), DimensionError);
}
