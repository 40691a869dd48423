//! Expected admissible triples (super-cause, mediators) with `Y* = {Y}` for
//! the reducible example graphs, in canonical order.

#![allow(dead_code)]

pub type Row = (&'static str, &'static [(&'static [&'static str], &'static [&'static str])]);

pub const ADMISSIBLE: &[Row] = &[
    ("fig2a", &[(&["X"], &["M"]), (&["V", "X"], &["M", "Z"])]),
    ("fig2b", &[(&["X"], &["M"]), (&["W", "X"], &["M"])]),
    ("fig2c", &[(&["X"], &["M"]), (&["X", "Z"], &["M"])]),
    ("fig2d", &[(&["X"], &["M"])]),
    ("fig2e", &[(&["X"], &["M"])]),
    ("fig2f", &[(&["X"], &["M"]), (&["X"], &["M", "V"])]),
    ("fig2g", &[(&["X"], &["M"]), (&["X"], &["M", "U"]), (&["V", "X"], &["U"])]),
    (
        "fig2h",
        &[
            (&["X"], &["M"]),
            (&["X"], &["H", "M"]),
            (&["X"], &["M", "S"]),
            (&["X"], &["H", "M", "S"]),
            (&["H", "X"], &["M"]),
            (&["H", "X"], &["M", "S"]),
        ],
    ),
    ("fig2i", &[(&["X"], &["M", "V"]), (&["W", "X"], &["V", "Z"]), (&["W", "X"], &["M", "V", "Z"])]),
    ("fig2j", &[(&["X"], &["M", "U"])]),
    ("fig2k", &[(&["U", "X"], &["M", "V"])]),
    ("fig2l", &[(&["X"], &["M"])]),
];

pub const NOT_REDUCIBLE: &[&str] = &["fig3a", "fig3b", "fig3c", "fig3d", "fig3e", "fig3f"];
