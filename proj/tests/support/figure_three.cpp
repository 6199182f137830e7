#include "figure_three.hpp"

namespace dps::corpus {

using bdd::Bdd;

namespace {

const char* kFigureThree = R"({
  "components": [
    {"name": "A", "locations": ["s"], "initialLocation": "s", "initialValuation": {},
     "transitions": [{"from": "s", "to": "s", "label": "a"}]},
    {"name": "B", "locations": ["s"], "initialLocation": "s", "initialValuation": {},
     "transitions": [{"from": "s", "to": "s", "label": "b"}]},
    {"name": "C", "locations": ["c0", "c1"], "initialLocation": "c0", "initialValuation": {},
     "transitions": [{"from": "c0", "to": "c1", "label": "c"}]},
    {"name": "G", "locations": ["s"], "initialLocation": "s", "initialValuation": {},
     "transitions": [{"from": "s", "to": "s", "label": "g"}]}
  ],
  "architecture": [["C", "A"], ["B", "A"], ["C", "B"], ["A", "G"], ["A", "B"]]
})";

} // namespace

FigureThree figure_three()
{
    FigureThree f;
    f.model = parse_model(kFigureThree);
    const auto& s = f.model.system;
    f.a = s.interaction_index("a");
    f.b = s.interaction_index("b");
    f.c = s.interaction_index("c");
    f.g = s.interaction_index("g");
    f.vis = visibility_matrix(s, f.model.architecture);
    f.ctx = allocate_context(s);
    auto en = build_enabledness(f.ctx, s);
    Bdd ctrl = build_control(f.ctx, s, f.vis, en);

    Configuration c2 = initial_configuration(s);
    Configuration c8 = c2;
    c8.loc[static_cast<std::size_t>(s.component_index("C"))] = 1;
    Bdd at_c2 = encode_configuration(f.ctx, c2);
    Bdd at_c8 = encode_configuration(f.ctx, c8);
    f.t_f = ctrl & ((at_c2 & (f.ctx.enc(f.a, true) | f.ctx.enc(f.g, true))) | (at_c8 & f.ctx.enc(f.b, true)));
    return f;
}

} // namespace dps::corpus
