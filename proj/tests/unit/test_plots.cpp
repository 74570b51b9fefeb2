#include "weavetex/error.hpp"
#include "weavetex/plots.hpp"

#include <doctest.h>

#include <set>

using namespace weavetex;

namespace {

PlotSpec spec(std::size_t ordinal, std::string options, std::vector<std::string> formats = {"pdf", "eps"}) {
    PlotSpec s;
    s.ordinal = ordinal;
    s.gfx_options = std::move(options);
    s.formats = std::move(formats);
    return s;
}

} // namespace

TEST_CASE("format resolution table") {
    using V = std::vector<std::string>;
    CHECK(resolve_formats(std::nullopt) == FormatSelection{V{"pdf", "eps"}, false});
    CHECK(resolve_formats("png") == FormatSelection{V{"png"}, false});
    CHECK(resolve_formats("pdf") == FormatSelection{V{"pdf"}, false});
    CHECK(resolve_formats("eps") == FormatSelection{V{"eps"}, false});
    CHECK(resolve_formats("imagemagick") == FormatSelection{V{"png"}, true});
    CHECK(resolve_formats(" png ") == FormatSelection{V{"png"}, false});
    CHECK(resolve_formats("") == FormatSelection{V{"pdf", "eps"}, false});
    CHECK_THROWS_AS(resolve_formats("gif"), Error);
    CHECK_THROWS_AS(resolve_formats("PNG"), Error);
    try {
        resolve_formats("svg");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownFormat);
    }
}

TEST_CASE("includegraphics text for the corpus option shapes") {
    CHECK(includegraphics_text(spec(3, "scale=.2")) == "\\includegraphics[scale=.2]{sage-plots/plot-3}");
    CHECK(includegraphics_text(spec(0, "")) == "\\includegraphics{sage-plots/plot-0}");
    CHECK(includegraphics_text(spec(5, "angle=45, width=.5\\textwidth")) ==
          "\\includegraphics[angle=45, width=.5\\textwidth]{sage-plots/plot-5}");
}

TEST_CASE("plot file names") {
    CHECK(plot_stem("sage-plots", 7) == "sage-plots/plot-7");
    CHECK(plot_stem("figs/", 7) == "figs/plot-7");
    CHECK(plot_file("sage-plots", 12, "png") == "sage-plots/plot-12.png");
    CHECK(plot_files(spec(2, "")) ==
          std::vector<std::string>{"sage-plots/plot-2.pdf", "sage-plots/plot-2.eps"});

    PlotSpec custom = spec(4, "width=1cm", {"png"});
    custom.out_dir = "out/figs";
    CHECK(includegraphics_text(custom) == "\\includegraphics[width=1cm]{out/figs/plot-4}");
}

TEST_CASE("property: plot files are unique across ordinals and stable") {
    std::set<std::string> seen;
    for (std::size_t ord = 0; ord < 200; ++ord) {
        for (const auto& f : plot_files(spec(ord, "")))
            CHECK(seen.insert(f).second);
        CHECK(plot_files(spec(ord, "")) == plot_files(spec(ord, "")));
        CHECK(includegraphics_text(spec(ord, "x")) == includegraphics_text(spec(ord, "x")));
    }
}

TEST_CASE("plot spec validation") {
    CHECK_NOTHROW(spec(1, "").validate());
    CHECK_THROWS_AS(spec(1, "", {}).validate(), Error);
    CHECK_THROWS_AS(spec(1, "", {"gif"}).validate(), Error);
    PlotSpec abs = spec(1, "");
    abs.out_dir = "/tmp";
    CHECK_THROWS_AS(abs.validate(), Error);
}
