//! Bundled example drawings, symmetry specs and over/under tables.

use crate::badness::BadnessWeights;
use crate::error::Result;
use crate::knot::InkscapePath;
use crate::render::OverUnderSpec;
use crate::svg::parse_svg;
use crate::symmetry::SymmetrySpec;

pub const KNOT_7_6_SVG: &str = include_str!("../fixtures/7_6_first_draft.svg");
pub const KNOT_4_1_SVG: &str = include_str!("../fixtures/4_1_first_draft.svg");
pub const KNOT_5_1_SVG: &str = include_str!("../fixtures/5_1_first_draft.svg");
pub const UNKNOT_SVG: &str = include_str!("../fixtures/unknot.svg");
pub const OU_7_6: &str = include_str!("../fixtures/ou76.txt");
pub const OU_4_1: &str = include_str!("../fixtures/ou41.txt");
pub const OU_5_1: &str = include_str!("../fixtures/ou51.txt");
pub const SYM_4_1: &str = include_str!("../fixtures/4_1.sym.toml");
pub const SYM_5_1: &str = include_str!("../fixtures/5_1.sym.toml");
pub const WEIGHTS: &str = include_str!("../fixtures/weights.toml");

/// Every drawing with its name.
pub const ALL_SVG: [(&str, &str); 4] = [
    ("7_6", KNOT_7_6_SVG),
    ("4_1", KNOT_4_1_SVG),
    ("5_1", KNOT_5_1_SVG),
    ("unknot", UNKNOT_SVG),
];

pub fn knot(svg: &str) -> Result<InkscapePath> {
    parse_svg(svg, None)
}

pub fn knot_7_6() -> InkscapePath {
    knot(KNOT_7_6_SVG).expect("bundled 7_6 drawing parses")
}

pub fn knot_4_1() -> InkscapePath {
    knot(KNOT_4_1_SVG).expect("bundled 4_1 drawing parses")
}

pub fn knot_5_1() -> InkscapePath {
    knot(KNOT_5_1_SVG).expect("bundled 5_1 drawing parses")
}

pub fn unknot() -> InkscapePath {
    knot(UNKNOT_SVG).expect("bundled unknot drawing parses")
}

pub fn ou_7_6() -> OverUnderSpec {
    OverUnderSpec::parse(OU_7_6).expect("bundled table parses")
}

pub fn ou_4_1() -> OverUnderSpec {
    OverUnderSpec::parse(OU_4_1).expect("bundled table parses")
}

pub fn ou_5_1() -> OverUnderSpec {
    OverUnderSpec::parse(OU_5_1).expect("bundled table parses")
}

pub fn sym_4_1() -> SymmetrySpec {
    SymmetrySpec::from_toml_str(SYM_4_1).expect("bundled spec parses")
}

pub fn sym_5_1() -> SymmetrySpec {
    SymmetrySpec::from_toml_str(SYM_5_1).expect("bundled spec parses")
}

pub fn weights() -> BadnessWeights {
    BadnessWeights::from_toml_str(WEIGHTS).expect("bundled weights parse")
}
