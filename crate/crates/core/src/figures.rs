//! Built-in example graphs, in the graph file syntax.
//!
//! `fig1*` show reductions by grouping, `fig2*` are reducible, and `fig3*`
//! are not. All use `X` as cause and `Y` as effect.

use crate::admg::Admg;
use crate::format::parse_graph;

pub const FIGURES: &[(&str, &str)] = &[
    ("frontdoor", include_str!("../figures/frontdoor.graph")),
    ("fig1a", include_str!("../figures/fig1a.graph")),
    ("fig1b", include_str!("../figures/fig1b.graph")),
    ("fig2a", include_str!("../figures/fig2a.graph")),
    ("fig2b", include_str!("../figures/fig2b.graph")),
    ("fig2c", include_str!("../figures/fig2c.graph")),
    ("fig2d", include_str!("../figures/fig2d.graph")),
    ("fig2e", include_str!("../figures/fig2e.graph")),
    ("fig2f", include_str!("../figures/fig2f.graph")),
    ("fig2g", include_str!("../figures/fig2g.graph")),
    ("fig2h", include_str!("../figures/fig2h.graph")),
    ("fig2i", include_str!("../figures/fig2i.graph")),
    ("fig2j", include_str!("../figures/fig2j.graph")),
    ("fig2k", include_str!("../figures/fig2k.graph")),
    ("fig2l", include_str!("../figures/fig2l.graph")),
    ("fig3a", include_str!("../figures/fig3a.graph")),
    ("fig3b", include_str!("../figures/fig3b.graph")),
    ("fig3c", include_str!("../figures/fig3c.graph")),
    ("fig3d", include_str!("../figures/fig3d.graph")),
    ("fig3e", include_str!("../figures/fig3e.graph")),
    ("fig3f", include_str!("../figures/fig3f.graph")),
];

pub fn source(name: &str) -> Option<&'static str> {
    FIGURES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Parses a built-in figure. Panics on an unknown name.
pub fn figure(name: &str) -> Admg {
    let text = source(name).unwrap_or_else(|| panic!("no built-in figure `{name}`"));
    parse_graph(text).expect("built-in figures parse")
}
